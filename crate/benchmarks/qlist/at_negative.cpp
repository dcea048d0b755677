#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    int v = l.at(-1);
    return v;
}
