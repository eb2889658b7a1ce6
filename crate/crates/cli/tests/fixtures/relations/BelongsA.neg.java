// pair: ship weight
class Carrier {
    void ship() {
        int weight = 0;
    }
}
