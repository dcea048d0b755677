#include <QList>

int main() {
    QList<int> l;
    l.push_back(1);
    l.clear();
    int f = l.front();
    return f;
}
