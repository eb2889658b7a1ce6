// pair: Order order
class Order {
}

class Orders {
    void save(Order order) {
    }
}
