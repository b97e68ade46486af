#include "tstore/huffman.hpp"

namespace tstore {

const SymbolFrequencies& default_frequencies() {
  // Symbol counts of data/default_corpus.nt, regenerated by `tstore build-tree --emit-table`.
  static const SymbolFrequencies table = {
#include "default_frequencies.inc"
  };
  return table;
}

const HuffmanTree& default_tree() {
  static const HuffmanTree tree = HuffmanTree::build(default_frequencies());
  return tree;
}

}  // namespace tstore
