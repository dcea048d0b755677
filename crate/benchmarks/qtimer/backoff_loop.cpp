#include <QTimer>

int main() {
    QTimer t;
    int period = 100;
    for (int i = 0; i < 5; i++) {
        t.setInterval(period);
        period = period - 30;
    }
    return 0;
}
