#include <QTimer>

int main() {
    QTimer t;
    int base = 100;
    int offset = 250;
    t.setInterval(base - offset);
    return 0;
}
