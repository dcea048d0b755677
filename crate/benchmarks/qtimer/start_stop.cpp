#include <QTimer>

int main() {
    QTimer t;
    t.start(100);
    assert(t.isActive());
    assert(t.interval() == 100);
    t.stop();
    assert(!t.isActive());
    return 0;
}
