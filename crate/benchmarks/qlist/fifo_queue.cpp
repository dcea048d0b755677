#include <QList>

int main() {
    QList<int> q;
    q.push_back(1);
    q.push_back(2);
    q.push_back(3);
    assert(q.front() == 1);
    q.pop_front();
    assert(q.front() == 2);
    q.pop_front();
    assert(q.front() == 3);
    q.pop_front();
    assert(q.isEmpty());
    return 0;
}
