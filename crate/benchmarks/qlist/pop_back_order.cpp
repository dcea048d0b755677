#include <QList>

int main() {
    QList<int> l;
    l.push_back(4);
    l.push_back(5);
    l.pop_back();
    assert(l.back() == 4);
    return 0;
}
