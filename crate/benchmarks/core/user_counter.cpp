class Counter {
public:
    int _hits[4];
    int _total;

    Counter() {
        _total = 0;
    }

    void hit(int slot) {
        _hits[slot] = _hits[slot] + 1;
        _total++;
    }
};

int main() {
    Counter c;
    c.hit(0);
    c.hit(3);
    c.hit(3);
    assert(c._hits[3] == 2);
    assert(c._total == 3);
    return 0;
}
