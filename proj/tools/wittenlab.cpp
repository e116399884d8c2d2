#include <cstdio>
int main() { std::puts("wittenlab: cli stub"); return 0; }
