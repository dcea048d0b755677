#include <QList>

int main() {
    QList<int> l;
    if (nondet_bool()) {
        l.push_back(42);
    }
    if (!l.isEmpty()) {
        assert(l.front() == 42);
    }
    return 0;
}
