#include <QFile>

int main() {
    QFile f("stream.dat");
    if (!f.open()) {
        return 1;
    }
    int total = 0;
    for (int i = 0; i < 3; i++) {
        total = total + f.read();
        if (i == 1) {
            f.close();
        }
    }
    return 0;
}
