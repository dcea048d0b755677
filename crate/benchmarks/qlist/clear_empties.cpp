#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    l.push_back(2);
    l.clear();
    assert(l.isEmpty());
    assert(l.size() == 0);
    return 0;
}
