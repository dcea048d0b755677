#include <QFile>

int main() {
    QFile f("data.txt");
    if (f.open()) {
        f.close();
        int b = f.read();
    }
    return 0;
}
