int abs_value(int x) {
    if (x < 0) {
        return -x;
    }
    return x;
}

int main() {
    int x = nondet_int();
    __VERIFIER_assume(x > -1000 && x < 1000);
    assert(abs_value(x) >= 0);
    return 0;
}
