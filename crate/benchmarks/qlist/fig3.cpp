#include <QList>

int main() {
    QList<int> mylist;
    mylist.push_front(300);
    assert(mylist.front() == 300);
    mylist.push_front(200);
    assert(mylist.front() == 200);
    return 0;
}
