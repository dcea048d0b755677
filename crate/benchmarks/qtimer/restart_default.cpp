#include <QTimer>

int main() {
    QTimer t;
    t.start(30);
    t.stop();
    t.start();
    assert(t.isActive());
    assert(t.interval() == 30);
    return 0;
}
