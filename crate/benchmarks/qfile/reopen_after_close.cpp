#include <QFile>

int main() {
    QFile f("a.bin");
    bool ok = f.open();
    f.close();
    if (ok) {
        assert(f.open());
        int b = f.read();
    }
    return 0;
}
