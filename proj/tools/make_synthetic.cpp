// Copyright 2026 The mcidx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Writes the bundled synthetic data set: <out>/synthetic/{corpus,qa}.jsonl
// and <out>/examples/sample.md.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mcidx/corpus.h"
#include "synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic corpus", "make_synthetic"};
  std::string out_dir = "data";
  mcidx::synthetic::Options options;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", options.seed, "Generator seed")->capture_default_str();
  app.add_option("--docs", options.n_docs, "Number of documents")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  try {
    const mcidx::synthetic::Corpus corpus = mcidx::synthetic::make_corpus(options);
    fs::create_directories(fs::path(out_dir) / "synthetic");
    fs::create_directories(fs::path(out_dir) / "examples");
    mcidx::write_corpus_jsonl(corpus.docs, fs::path(out_dir) / "synthetic" / "corpus.jsonl");
    mcidx::write_qa_jsonl(corpus.qa, fs::path(out_dir) / "synthetic" / "qa.jsonl");
    std::ofstream md(fs::path(out_dir) / "examples" / "sample.md", std::ios::binary);
    md << mcidx::synthetic::render_markdown(mcidx::synthetic::make_small_corpus(3).docs.front());
    std::cerr << "wrote " << corpus.docs.size() << " documents and " << corpus.qa.size()
              << " questions under " << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "make_synthetic: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
