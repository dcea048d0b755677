#include <QList>

int main() {
    QList<int> l;
    l.push_back(10);
    l.push_back(20);
    l.push_back(30);
    l.pop_front();
    assert(l.front() == 20);
    assert(l.at(1) == 30);
    assert(l.size() == 2);
    return 0;
}
