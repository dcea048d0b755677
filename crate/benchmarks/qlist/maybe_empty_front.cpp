#include <QList>

int main() {
    QList<int> l;
    if (nondet_bool()) {
        l.push_back(1);
    }
    int f = l.front();
    return f;
}
