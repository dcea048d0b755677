#include <QList>

int main() {
    QList<int> l;
    l.push_back(5);
    l.pop_back();
    l.pop_back();
    return 0;
}
