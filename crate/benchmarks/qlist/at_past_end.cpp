#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    l.push_back(2);
    int v = l.at(l.size());
    return v;
}
