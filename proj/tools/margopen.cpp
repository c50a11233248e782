#include <string>
#include <vector>

#include <margopen/cli.hpp>

int main(int argc, char** argv) {
  return margopen::cli::dispatch(std::vector<std::string>(argv, argv + argc));
}
