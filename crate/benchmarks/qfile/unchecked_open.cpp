#include <QFile>

int main() {
    QFile f("maybe_missing.txt");
    f.open();
    int b = f.read();
    return 0;
}
