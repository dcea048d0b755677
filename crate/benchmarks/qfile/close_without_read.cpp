#include <QFile>

int main() {
    QFile f("log.txt");
    f.open();
    f.close();
    return 0;
}
