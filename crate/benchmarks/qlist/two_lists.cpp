#include <QList>

int main() {
    QList<int> a;
    QList<int> b;
    a.push_back(1);
    b.push_back(2);
    b.push_back(3);
    assert(a.size() == 1);
    assert(b.size() == 2);
    assert(a.front() + b.back() == 4);
    return 0;
}
