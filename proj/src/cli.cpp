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


#include "mcidx/cli.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcidx/chunking.h"
#include "mcidx/corpus.h"
#include "mcidx/embedding.h"
#include "mcidx/evaluation.h"
#include "mcidx/fusion.h"
#include "mcidx/index_io.h"
#include "mcidx/kernels.h"
#include "mcidx/llm.h"
#include "mcidx/views.h"

namespace mcidx::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidK:
    case ErrorCode::kInvalidTarget:
      return kExitUsage;
    case ErrorCode::kProvider:
      return kExitProvider;
    default:
      return kExitData;
  }
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty list \"" + s + "\"");
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
  } else {
    write_text(path, data);
  }
}

std::vector<QAItem> load_qa(const std::string& path, const std::vector<Document>& docs,
                            std::ostream& err) {
  QaLoadResult r = load_and_filter_qa(path, docs);
  for (const DroppedQa& d : r.dropped) {
    err << "warning: dropped question " << d.question_id << " (line " << d.line
        << "): " << d.reason << "\n";
  }
  return std::move(r.items);
}

const Document& find_doc(const std::vector<Document>& docs, const std::string& doc_id) {
  for (const Document& d : docs) {
    if (d.doc_id() == doc_id) return d;
  }
  throw Error(ErrorCode::kUnknownDoc, "document " + doc_id + " not in corpus");
}

// Embedding providers keyed by name, created on first use.
class Providers {
 public:
  EmbeddingProvider* for_retriever(const RetrieverSpec& spec) {
    if (spec.kind != RetrieverSpec::Kind::kDense) return nullptr;
    auto& slot = providers_[spec.provider];
    if (!slot) slot = make_embedding_provider(spec.provider);
    return slot.get();
  }

 private:
  std::map<std::string, std::unique_ptr<EmbeddingProvider>> providers_;
};

struct Common {
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double k1 = Bm25Params{}.k1;
  double b = Bm25Params{}.b;
  bool invert_parity = false;

  Bm25Params bm25() const { return {k1, b}; }
};

void add_bm25_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--k1", c.k1, "BM25 term-frequency saturation")->capture_default_str();
  cmd->add_option("--b", c.b, "BM25 length normalization")->capture_default_str();
}

void add_parity_flag(CLI::App* cmd, Common& c) {
  cmd->add_flag("--invert-parity", c.invert_parity,
                "Give the larger alternating budget to even question ordinals");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view content-aware indexing for long structured documents", "mcidx"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--jobs", common.jobs, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);

  // ingest
  std::vector<std::string> ingest_inputs;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Convert markdown files to corpus JSONL");
  ingest->add_option("inputs", ingest_inputs, "Markdown files (doc_id = file stem)")->required();
  ingest->add_option("--out", ingest_out, "Corpus JSONL path (default stdout)");

  // chunk
  std::string corpus_path, qa_path, views_path, out_path, scheme_spec = "content";
  auto* chunk = app.add_subcommand("chunk", "Chunk a corpus");
  chunk->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  chunk->add_option("--scheme", scheme_spec, "content | flc:<N> | flc-content:<N>")
      ->capture_default_str();
  chunk->add_option("--out", out_path, "Chunks JSONL path (default stdout)");

  // views
  std::string generator = "extractive";
  std::size_t keyword_count = kDefaultKeywordCount;
  auto* views = app.add_subcommand("views", "Build raw-text, keyword and summary views");
  views->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  views->add_option("--generator", generator, "llm | extractive")
      ->check(CLI::IsMember({"llm", "extractive"}))->capture_default_str();
  views->add_option("--keywords", keyword_count, "Keywords per section (extractive)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  views->add_option("--out", out_path, "Views JSONL path (default stdout)");

  // index
  std::string retriever_spec = "bm25", view_name = "raw", doc_filter;
  auto* index = app.add_subcommand("index", "Build and save one index per document");
  index->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  index->add_option("--scheme", scheme_spec, "content | flc:<N> | flc-content:<N>")
      ->capture_default_str();
  index->add_option("--retriever", retriever_spec, "tfidf | bm25 | dense:<provider>")
      ->capture_default_str();
  index->add_option("--view", view_name, "raw | keywords | summary")->capture_default_str();
  index->add_option("--views", views_path, "Views JSONL (keyword / summary views)");
  index->add_option("--doc", doc_filter, "Only this document");
  index->add_option("--out", out_path, "Output directory; one subdirectory per document")
      ->required();
  add_bm25_flags(index, common);

  // retrieve
  std::string question, mode_spec = "mc", k_spec = "3";
  std::size_t ordinal = 0;
  auto* retrieve = app.add_subcommand("retrieve", "Retrieve units for one question");
  retrieve->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  retrieve->add_option("--doc", doc_filter, "Document to search")->required();
  retrieve->add_option("--question", question, "Question text")->required();
  retrieve->add_option("--scheme", scheme_spec, "content | flc:<N> | flc-content:<N>")
      ->capture_default_str();
  retrieve->add_option("--retriever", retriever_spec, "tfidf | bm25 | dense:<provider>")
      ->capture_default_str();
  retrieve->add_option("--mode", mode_spec, "mc | single:raw | single:keywords | single:summary")
      ->capture_default_str();
  retrieve->add_option("--k", k_spec, "Retrieval budget (1.5 or a whole number)")
      ->capture_default_str();
  retrieve->add_option("--ordinal", ordinal, "Question ordinal for budget alternation")
      ->capture_default_str();
  retrieve->add_option("--views", views_path, "Views JSONL (needed by view modes)");
  add_bm25_flags(retrieve, common);
  add_parity_flag(retrieve, common);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluation runs");
  eval->require_subcommand(1);

  std::string markdown_path, per_question_path;
  std::string ks_spec = "1.5,3,5,10";
  auto* recall = eval->add_subcommand("recall", "Answer-scope recall per k");
  recall->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  recall->add_option("--qa", qa_path, "QA JSONL")->required();
  recall->add_option("--scheme", scheme_spec, "Comma list of schemes")->capture_default_str();
  recall->add_option("--retriever", retriever_spec, "Comma list of retrievers")
      ->capture_default_str();
  recall->add_option("--mode", mode_spec, "Comma list of modes")->capture_default_str();
  recall->add_option("--k", ks_spec, "Comma list of budgets")->capture_default_str();
  recall->add_option("--views", views_path, "Views JSONL (needed by view modes)");
  recall->add_option("--out", out_path, "CSV path (default stdout)");
  recall->add_option("--markdown", markdown_path, "Also write a Markdown table here");
  recall->add_option("--per-question", per_question_path, "Also write per-question recall CSV");
  add_bm25_flags(recall, common);
  add_parity_flag(recall, common);

  auto* chunk_err = eval->add_subcommand("chunking-error", "Fraction of split answer scopes");
  chunk_err->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  chunk_err->add_option("--qa", qa_path, "QA JSONL")->required();
  chunk_err->add_option("--scheme", scheme_spec, "Comma list of schemes")->capture_default_str();
  chunk_err->add_option("--out", out_path, "CSV path (default stdout)");

  std::string mode_a = "mc", mode_b = "single:raw", scheme_a = "content", scheme_b = "content";
  std::size_t limit = 0;
  auto* answers = eval->add_subcommand("answers", "Generate answers for two configurations and judge them");
  answers->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  answers->add_option("--qa", qa_path, "QA JSONL")->required();
  answers->add_option("--views", views_path, "Views JSONL (needed by view modes)");
  answers->add_option("--retriever", retriever_spec, "tfidf | bm25 | dense:<provider>")
      ->capture_default_str();
  answers->add_option("--k", k_spec, "Retrieval budget")->capture_default_str();
  answers->add_option("--scheme-a", scheme_a, "Scheme of configuration A")->capture_default_str();
  answers->add_option("--mode-a", mode_a, "Mode of configuration A")->capture_default_str();
  answers->add_option("--scheme-b", scheme_b, "Scheme of configuration B")->capture_default_str();
  answers->add_option("--mode-b", mode_b, "Mode of configuration B")->capture_default_str();
  answers->add_option("--limit", limit, "Judge at most this many questions (0 = all)")
      ->capture_default_str();
  answers->add_option("--out", out_path, "Transcript JSONL path")->required();
  add_bm25_flags(answers, common);
  add_parity_flag(answers, common);

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
  stats->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  stats->add_option("--qa", qa_path, "QA JSONL");
  stats->add_option("--min-tokens", limit, "Only documents with at least this many tokens")
      ->capture_default_str();

  // questions
  auto* questions = app.add_subcommand("questions", "Generate QA items with the LLM");
  questions->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  questions->add_option("--out", out_path, "QA JSONL path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    kernels::set_threads(common.jobs);

    if (*ingest) {
      std::vector<Document> docs;
      for (const std::string& input : ingest_inputs) {
        docs.push_back(parse_markdown(read_text(input), fs::path(input).stem().string()));
      }
      std::string data;
      for (const Document& d : docs) data += document_to_json_line(d) + "\n";
      emit(ingest_out, data, out);
      return kExitOk;
    }

    if (*chunk) {
      const Scheme scheme = Scheme::parse(scheme_spec);
      std::string data;
      for (const Document& d : load_corpus_jsonl(corpus_path)) {
        for (const Chunk& c : chunk_document(d, scheme)) data += chunk_to_json_line(c) + "\n";
      }
      emit(out_path, data, out);
      return kExitOk;
    }

    if (*views) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      std::unique_ptr<LlmClient> llm;
      ViewGenerator gen = ViewGenerator::extractive();
      if (generator == "llm") {
        llm = std::make_unique<HttpLlmClient>(llm_config_from_env());
        gen = ViewGenerator::with_llm(*llm);
      }
      gen.keyword_count = keyword_count;
      std::string data;
      for (const Document& d : docs) {
        for (const ViewEntry& e : build_views(d, gen)) data += view_to_json_line(e) + "\n";
      }
      emit(out_path, data, out);
      return kExitOk;
    }

    if (*index) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      const Scheme scheme = Scheme::parse(scheme_spec);
      const RetrieverSpec spec = RetrieverSpec::parse(retriever_spec);
      const auto view = parse_view_short_name(view_name);
      if (!view) throw Error(ErrorCode::kInvalidArgument, "unknown view " + view_name);
      if (*view != ViewKind::kRawText && scheme.kind != SchemeKind::kContentAware) {
        throw Error(ErrorCode::kInvalidArgument, "view indexes need content-aware chunks");
      }
      std::optional<ViewStore> store;
      if (*view != ViewKind::kRawText) {
        if (views_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--views is required");
        store.emplace(load_views_jsonl(views_path));
      }
      Providers providers;
      for (const Document& d : docs) {
        if (!doc_filter.empty() && d.doc_id() != doc_filter) continue;
        std::vector<Unit> units;
        if (store) {
          units = store->units(d, *view);
        } else {
          for (const Chunk& c : chunk_document(d, scheme)) units.push_back({c.chunk_id, c.text});
        }
        const fs::path dir = fs::path(out_path) / d.doc_id();
        switch (spec.kind) {
          case RetrieverSpec::Kind::kTfIdf:
            save_index(SparseIndex::build(units, SparseKind::kTfIdf), dir);
            break;
          case RetrieverSpec::Kind::kBm25:
            save_index(SparseIndex::build(units, SparseKind::kBm25, common.bm25()), dir);
            break;
          case RetrieverSpec::Kind::kDense:
            save_index(DenseIndex::build(units, *providers.for_retriever(spec)), dir);
            break;
        }
        err << "indexed " << d.doc_id() << " (" << units.size() << " units) -> "
            << dir.string() << "\n";
      }
      return kExitOk;
    }

    if (*retrieve) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      const Document& doc = find_doc(docs, doc_filter);
      std::optional<ViewStore> store;
      if (!views_path.empty()) store.emplace(load_views_jsonl(views_path));
      Providers providers;
      RetrievalSetup setup;
      setup.scheme = Scheme::parse(scheme_spec);
      setup.retriever = RetrieverSpec::parse(retriever_spec);
      setup.mode = Mode::parse(mode_spec);
      setup.bm25 = common.bm25();
      setup.views = store ? &*store : nullptr;
      setup.invert_parity = common.invert_parity;
      setup.provider = providers.for_retriever(setup.retriever);
      const DocumentRetriever retriever(doc, setup);
      const Retrieved got = retriever.retrieve(question, RetrievalBudget::parse(k_spec), ordinal);
      out << "rank\tunit_id\tchar_start\tchar_end\n";
      for (std::size_t i = 0; i < got.unit_ids.size(); ++i) {
        out << i + 1 << "\t" << got.unit_ids[i] << "\t" << got.spans[i].start << "\t"
            << got.spans[i].end << "\n";
      }
      return kExitOk;
    }

    if (*recall) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      const std::vector<QAItem> qa = load_qa(qa_path, docs, err);
      const std::vector<RetrievalBudget> ks = parse_budget_list(ks_spec);
      std::optional<ViewStore> store;
      if (!views_path.empty()) store.emplace(load_views_jsonl(views_path));
      const auto schemes = split_list(scheme_spec);
      const auto retrievers = split_list(retriever_spec);
      const auto modes = split_list(mode_spec);
      const bool grid = schemes.size() * retrievers.size() * modes.size() > 1;
      Providers providers;
      RecallReport report;
      bool skipped_reported = false;
      for (const std::string& s : schemes) {
        for (const std::string& r : retrievers) {
          for (const std::string& m : modes) {
            RetrievalSetup setup;
            setup.scheme = Scheme::parse(s);
            setup.retriever = RetrieverSpec::parse(r);
            setup.mode = Mode::parse(m);
            setup.bm25 = common.bm25();
            setup.views = store ? &*store : nullptr;
            setup.invert_parity = common.invert_parity;
            const bool raw_only = setup.mode == Mode::single(ViewKind::kRawText);
            if (grid && !raw_only && setup.scheme.kind != SchemeKind::kContentAware) continue;
            setup.provider = providers.for_retriever(setup.retriever);
            RecallReport part = eval_recall(docs, qa, setup, ks);
            for (RecallRow& row : part.rows) report.rows.push_back(std::move(row));
            if (!skipped_reported) {
              for (const SkippedQuestion& q : part.skipped) {
                err << "warning: skipped question " << q.question_id << ": " << q.reason << "\n";
              }
              skipped_reported = true;
            }
          }
        }
      }
      emit(out_path, report.to_csv(), out);
      if (!markdown_path.empty()) write_text(markdown_path, report.to_markdown());
      if (!per_question_path.empty()) {
        std::string data = "scheme,retriever,mode,k,question_id,recall\n";
        char buf[32];
        for (const RecallRow& row : report.rows) {
          for (std::size_t i = 0; i < row.n(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6f", row.per_question[i]);
            data += row.scheme.to_string() + "," + row.retriever.to_string() + "," +
                    row.mode.to_string() + "," + row.k.to_string() + "," + row.question_ids[i] +
                    "," + buf + "\n";
          }
        }
        write_text(per_question_path, data);
      }
      return kExitOk;
    }

    if (*chunk_err) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      const std::vector<QAItem> qa = load_qa(qa_path, docs, err);
      std::string data = "scheme,n_scopes,n_split,error_rate\n";
      char buf[32];
      for (const std::string& s : split_list(scheme_spec)) {
        const Scheme scheme = Scheme::parse(s);
        std::vector<Chunk> chunks;
        for (const Document& d : docs) {
          for (Chunk& c : chunk_document(d, scheme)) chunks.push_back(std::move(c));
        }
        const ChunkingErrorReport r = chunking_error(chunks, qa, docs);
        std::snprintf(buf, sizeof buf, "%.6f", r.error_rate);
        data += scheme.to_string() + "," + std::to_string(r.n_scopes) + "," +
                std::to_string(r.n_split) + "," + buf + "\n";
      }
      emit(out_path, data, out);
      return kExitOk;
    }

    if (*answers) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      std::vector<QAItem> qa = load_qa(qa_path, docs, err);
      if (limit > 0 && qa.size() > limit) qa.resize(limit);
      std::optional<ViewStore> store;
      if (!views_path.empty()) store.emplace(load_views_jsonl(views_path));
      HttpLlmClient llm(llm_config_from_env());
      Providers providers;
      const RetrievalBudget k = RetrievalBudget::parse(k_spec);
      auto make_setup = [&](const std::string& scheme, const std::string& mode) {
        RetrievalSetup setup;
        setup.scheme = Scheme::parse(scheme);
        setup.retriever = RetrieverSpec::parse(retriever_spec);
        setup.mode = Mode::parse(mode);
        setup.bm25 = common.bm25();
        setup.views = store ? &*store : nullptr;
        setup.invert_parity = common.invert_parity;
        setup.provider = providers.for_retriever(setup.retriever);
        validate_setup(setup);
        return setup;
      };
      const RetrievalSetup setup_a = make_setup(scheme_a, mode_a);
      const RetrievalSetup setup_b = make_setup(scheme_b, mode_b);
      std::map<std::string, std::pair<DocumentRetriever, DocumentRetriever>> retrievers;
      std::vector<AnswerRecord> records;
      int score_counts[3] = {0, 0, 0};
      int round_counts[3] = {0, 0, 0};
      for (std::size_t q = 0; q < qa.size(); ++q) {
        const QAItem& item = qa[q];
        const Document& doc = find_doc(docs, item.doc_id);
        auto it = retrievers.find(doc.doc_id());
        if (it == retrievers.end()) {
          it = retrievers
                   .emplace(std::piecewise_construct, std::forward_as_tuple(doc.doc_id()),
                            std::forward_as_tuple(DocumentRetriever(doc, setup_a),
                                                  DocumentRetriever(doc, setup_b)))
                   .first;
        }
        AnswerRecord rec;
        rec.question_id = item.question_id;
        rec.answer_a = generate_answer(
            item.question, it->second.first.retrieve(item.question, k, q).texts, llm);
        rec.answer_b = generate_answer(
            item.question, it->second.second.retrieve(item.question, k, q).texts, llm);
        rec.outcome = judge_pairwise(item.question, item.answer, rec.answer_a, rec.answer_b, llm);
        ++score_counts[static_cast<int>(rec.outcome.score_based)];
        ++round_counts[static_cast<int>(rec.outcome.round_based)];
        records.push_back(std::move(rec));
      }
      write_answer_records(records, out_path);
      out << "metric,win_a,win_b,tie\n";
      out << "score_based," << score_counts[0] << "," << score_counts[1] << ","
          << score_counts[2] << "\n";
      out << "round_based," << round_counts[0] << "," << round_counts[1] << ","
          << round_counts[2] << "\n";
      return kExitOk;
    }

    if (*stats) {
      std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      if (limit > 0) docs = filter_long_docs(docs, limit);
      std::vector<QAItem> qa;
      if (!qa_path.empty()) qa = load_qa(qa_path, docs, err);
      const CorpusStats s = corpus_stats(docs, qa);
      nlohmann::json j = {{"n_documents", s.n_documents},
                          {"n_questions", s.n_questions},
                          {"mean_sections_per_doc", s.mean_sections_per_doc},
                          {"mean_tokens_per_doc", s.mean_tokens_per_doc},
                          {"mean_tokens_per_section", s.mean_tokens_per_section},
                          {"mean_tokens_per_answer_scope", s.mean_tokens_per_answer_scope}};
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*questions) {
      const std::vector<Document> docs = load_corpus_jsonl(corpus_path);
      HttpLlmClient llm(llm_config_from_env());
      std::vector<QAItem> items;
      for (const Document& d : docs) {
        for (const Section& s : d.sections()) {
          if (text::trim(s.text).empty()) continue;
          try {
            for (QAItem& q : generate_questions(d, s, llm)) items.push_back(std::move(q));
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kParse) throw;
            err << "warning: " << d.doc_id() << "/" << s.section_id << ": " << e.what() << "\n";
          }
        }
      }
      write_qa_jsonl(items, out_path);
      err << "wrote " << items.size() << " questions to " << out_path << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "mcidx: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "mcidx: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace mcidx::cli
