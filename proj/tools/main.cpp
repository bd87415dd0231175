#include "cli_app.hpp"

int main(int argc, char** argv) { return aniso::cli::cli_main(argc, argv); }
