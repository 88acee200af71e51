#include "coneinf/coneinf.hpp"
int main() { return 0; }
