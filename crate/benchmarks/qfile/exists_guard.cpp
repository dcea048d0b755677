#include <QFile>

int main() {
    QFile f("config.ini");
    if (f.exists()) {
        f.open();
        int b = f.read();
    }
    return 0;
}
