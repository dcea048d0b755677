class Buffer {
public:
    int _data[4];

    void put(int i, int v) {
        _data[i] = v;
    }
};

int main() {
    Buffer b;
    int i = nondet_int();
    __VERIFIER_assume(i >= 0 && i <= 4);
    b.put(i, 1);
    return 0;
}
