// pair: Base Derived
class Base {
}

class Derived extends Base {
}
