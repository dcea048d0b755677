int main() {
    int x = nondet_int();
    __VERIFIER_assume(x > 0 && x < 10);
    assert(100 / x != 50);
    return 0;
}
