package util;

class Range {
    int maxConstantValue;
    int minConstantValue;
}
