#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    l.push_back(2);
    assert(l.front() == 1);
    assert(l.back() == 2);
    return 0;
}
