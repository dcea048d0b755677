#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    l.push_back(2);
    l.push_back(3);
    int i = nondet_int();
    __VERIFIER_assume(i >= 0 && i <= 3);
    int v = l.at(i);
    return v;
}
