#include <QList>

int main() {
    QList<int> s;
    s.push_back(1);
    s.push_back(2);
    s.push_back(3);
    assert(s.back() == 3);
    s.pop_back();
    assert(s.back() == 2);
    s.pop_back();
    assert(s.back() == 1);
    return 0;
}
