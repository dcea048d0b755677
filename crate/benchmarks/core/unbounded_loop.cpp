int main() {
    int i = 0;
    while (i < 20) {
        i = i + 1;
    }
    assert(i == 20);
    return 0;
}
