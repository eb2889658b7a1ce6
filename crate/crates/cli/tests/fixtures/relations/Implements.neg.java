// pair: Shape Circle
class Shape {
}

class Circle extends Shape {
}
