#include <QList>

int main() {
    QList<int> l;
    assert(l.isEmpty());
    l.push_back(7);
    l.push_front(8);
    l.push_back(9);
    assert(l.size() == 3);
    l.pop_back();
    assert(l.size() == 2);
    return 0;
}
