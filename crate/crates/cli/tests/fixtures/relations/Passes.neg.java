// pair: limit max
class Buffer {
    int max;

    void resize(int limit, int step) {
    }

    void grow() {
        resize(max);
    }
}
