#include <QTimer>

int main() {
    QTimer fast;
    QTimer slow;
    fast.start(10);
    slow.setInterval(fast.interval() * 100);
    assert(slow.interval() == 1000);
    assert(fast.isActive() && !slow.isActive());
    return 0;
}
