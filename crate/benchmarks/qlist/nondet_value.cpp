#include <QList>

int main() {
    int x = nondet_int();
    QList<int> l;
    l.push_back(x);
    l.push_front(x + 1);
    assert(l.back() == x);
    assert(l.front() - l.back() == 1);
    return 0;
}
