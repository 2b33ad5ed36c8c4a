#include "cli_app.hpp"

int main(int argc, char** argv) { return ltlmine::cli::run(argc, argv); }
