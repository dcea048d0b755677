#include <QTimer>

int main() {
    QTimer t;
    t.setInterval(-5);
    return 0;
}
