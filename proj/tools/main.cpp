#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = qcarm::cli::parse(argc, argv, std::cout, std::cerr);
  if (const int* code = std::get_if<int>(&parsed)) return *code;
  return qcarm::cli::run(std::get<qcarm::cli::RunConfig>(parsed), std::cout, std::cerr);
}
