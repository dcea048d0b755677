#include <QList>

int main() {
    QList<int> l;
    int last = l.back();
    return last;
}
