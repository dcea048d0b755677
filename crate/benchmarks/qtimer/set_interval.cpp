#include <QTimer>

int main() {
    QTimer t;
    t.setInterval(250);
    assert(t.interval() == 250);
    assert(!t.isActive());
    return 0;
}
