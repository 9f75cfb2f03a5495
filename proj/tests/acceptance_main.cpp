#include <cstring>
#include <iostream>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  bool heavy = true;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) heavy = false;
  bool ok = weillift::acceptance::run_all(std::cout, heavy);
  return ok ? 0 : 1;
}
