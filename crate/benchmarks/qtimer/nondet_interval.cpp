#include <QTimer>

int main() {
    QTimer t;
    int msec = nondet_int();
    t.start(msec);
    return 0;
}
