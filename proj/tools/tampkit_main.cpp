#include <iostream>
int main() { std::cout << "tampkit\n"; return 0; }
