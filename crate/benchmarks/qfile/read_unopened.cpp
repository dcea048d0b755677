#include <QFile>

int main() {
    QFile f("data.txt");
    int b = f.read();
    return 0;
}
