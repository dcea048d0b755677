#include <QTimer>

int main() {
    QTimer t;
    t.start(50);
    t.stop();
    assert(t.isActive());
    return 0;
}
