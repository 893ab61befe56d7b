#include "mcrt/mcrt.hpp"
int main() { return 0; }
