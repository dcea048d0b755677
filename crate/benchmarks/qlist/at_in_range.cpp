#include <QList>

int main() {
    QList<int> l;
    l.push_back(3);
    l.push_back(6);
    l.push_back(9);
    assert(l.at(0) + l.at(1) + l.at(2) == 18);
    return 0;
}
