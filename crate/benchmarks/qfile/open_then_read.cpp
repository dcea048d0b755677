#include <QFile>

int main() {
    QFile f("data.txt");
    if (f.open()) {
        int b = f.read();
        f.close();
    }
    return 0;
}
