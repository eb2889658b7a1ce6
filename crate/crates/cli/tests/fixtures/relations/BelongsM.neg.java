// pair: Shop checkout
class Shop {
}

class Till {
    void checkout() {
    }
}
