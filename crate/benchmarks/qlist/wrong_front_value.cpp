#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    l.push_front(2);
    assert(l.front() == 1);
    return 0;
}
