#include <QTimer>

int main() {
    QTimer t;
    t.start(-1000);
    return 0;
}
