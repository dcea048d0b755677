#include <QTimer>

int main() {
    QTimer t;
    t.setInterval(0);
    t.start();
    assert(t.interval() == 0);
    return 0;
}
