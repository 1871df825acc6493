#include "cli_app.hpp"

int main(int argc, char** argv) { return mriseg::cli::run(argc, argv); }
