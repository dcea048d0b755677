#include <QList>

int main() {
    QList<int> l;
    for (int i = 0; i < 5; i++) {
        l.push_back(i * i);
    }
    assert(l.size() == 5);
    assert(l.at(4) == 16);
    return 0;
}
