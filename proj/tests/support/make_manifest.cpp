// Writes a synthetic corpus manifest: make_manifest <out.jsonl> [docs-per-level] [seed] [langs...]

#include <fstream>
#include <iostream>

#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_manifest OUT [DOCS_PER_LEVEL] [SEED] [LANG...]\n";
    return 2;
  }
  ara::fixtures::SyntheticOptions options;
  if (argc > 2) options.docs_per_level = std::stoul(argv[2]);
  if (argc > 3) options.seed = std::stoull(argv[3]);
  if (argc > 4) options.languages.assign(argv + 4, argv + argc);
  std::ofstream out(argv[1]);
  ara::write_manifest(ara::fixtures::make_synthetic_corpus(options), out);
  return out ? 0 : 2;
}
