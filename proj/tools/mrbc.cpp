#include "mrbc/app.hpp"

int main(int argc, char **argv) { return mrbc::app::main_entry(argc, argv); }
