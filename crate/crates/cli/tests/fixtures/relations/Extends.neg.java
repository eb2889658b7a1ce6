// pair: Base Derived
interface Base {
}

class Derived implements Base {
}
