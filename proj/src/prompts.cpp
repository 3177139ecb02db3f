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

#include "mcidx/prompts.h"

#include <cctype>

#include "mcidx/errors.h"

namespace mcidx::prompts {

const std::string_view kQuestionGeneration =
    R"(You are a sophisticated question generator. You need to use the reference text to generate a question,
with its question type, and the supporting context sentences, and the short answer.

The generation should strictly follow the following guidelines:
(1) The question must be sufficiently answered by the reference text only;
(2) The question need to be short and accurate;
(3) All supporting context sentences must be the original text from the reference text;
(4) The question should need long context (more than 5 sentences) to answer accurately;
(5) The type of each question needs to be ONE from the following eight types:
1. **Questions about Narrative and Plot Details**: inquire about specific details or the sequence of events
    in a narrative (such as a story, movie, or historical account) require understanding the entire context
   to provide an accurate answer.
2. **Summarization Questions**: require the summarization of a long passage, argument, or a complicated
    process rely on understanding the full context to capture the essence of the content without omitting
   crucial details.
3. **Inferential and Implied Questions**: depend on understanding subtleties and reading between the lines.
   They may involve inferring the author's intent, the mood of the characters in a story, or the
   implications of certain actions, which can't be answered with a direct quote from the text.
4. **Questions Requiring Synthesis of Information**: necessitate the synthesis of information dispersed
   across a long passage or multiple passages, requiring an understanding of the broader context to
   answer correctly.
5. **Cause and Effect Questions**: to understand the causal relationship between events in a text, one
   often needs to consider a substantial portion of the context to identify the factors that led to
   a particular outcome.
6. **Comparative Questions**: ask for comparisons between different ideas, characters, or events within
   a text often require a comprehensive understanding of each element being compared.
7. **Explanatory Questions**: ask for explanations of complex concepts or processes that are described
   in detail within the text. Answering these questions accurately requires a deep understanding of the
   entire explanation as presented.
8. **Questions about Themes and Motifs**: when asked about the overarching themes or motifs in a text, one
   must consider the entire work to identify patterns and draw conclusions about the central messages.

**Reference text**:
$text

Return the question and answer in the following json format:
{question:"...", type:"...", answer:"...", answer_context:"..."}

Generate $count questions. Return one json object per question, each on its own line.
)";

const std::string_view kSummary =
    R"(You are a helpful summarization assistant. Please help me summarize the following section into no more
than 10 sentences or 200 words.

**Section Name**:
$section_name

**Section Text**:
$section_text
)";

const std::string_view kKeywords =
    R"(You are a helpful keyword extractor. You need to extract keywords from the following section. The keywords
should consist of concepts, entities, or important descriptions that are related to the section text, which
could be used to answer any questions from users.

**Section Name**:
$section_name

**Section Text**:
**Beginning of text**
$section_text
**End of text**

Please output format in list format: [...]. Do not output anything else aside from this list.
)";

const std::string_view kAnswer =
    R"(You are a helpful question answering assistant. You are good at answering question based on provided contents.

**Contents**: $quotes

**Question**: $question

**Instruction:**
Assume you do not have any background and internal knowledge about this given contents and question.
You need to answer the question using the given contents only. The answer need to be short and accurate.
)";

const std::string_view kJudge =
    R"(You are a helpful assistant for evaluating answers. Given a question and ground truth answer, there will be
two possible answers. Provide a score from 0-10 for each answer.

**Question**: $question

**Ground truth answer**: $ground_truth_answer

**Answer 1**: $answer_1
**Answer 2**: $answer_2


**Instruction:**
Assume you do not have any background and internal knowledge about this given contents and question. You
need to evaluate each answer and give a score based on the ground truth answer.
You must write out your reasoning of the score based on relevance to the answer. If both answers are
exactly similar, you must ensure the scores and reasoning for both answers are the same.
Finally in a new line, you must return the scores and nothing else. The scores must be returned in the
following json format:
{"answer_1_score":"...", "answer_2_score":"..."}
)";

namespace {

bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

std::string render(std::string_view tmpl,
                   const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '$' || i + 1 >= tmpl.size() || !is_ident(tmpl[i + 1])) {
      out.push_back(tmpl[i++]);
      continue;
    }
    std::size_t j = i + 1;
    while (j < tmpl.size() && is_ident(tmpl[j])) ++j;
    std::string_view name = tmpl.substr(i + 1, j - i - 1);
    auto it = values.find(name);
    if (it == values.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prompt placeholder $" + std::string(name) + " has no value");
    }
    out += it->second;
    i = j;
  }
  return out;
}

std::string question_generation(std::string_view section_text, int count) {
  return render(kQuestionGeneration, {{"text", std::string(section_text)},
                                      {"count", std::to_string(count)}});
}

std::string summary(std::string_view section_name, std::string_view section_text) {
  return render(kSummary, {{"section_name", std::string(section_name)},
                           {"section_text", std::string(section_text)}});
}

std::string keywords(std::string_view section_name, std::string_view section_text) {
  return render(kKeywords, {{"section_name", std::string(section_name)},
                            {"section_text", std::string(section_text)}});
}

std::string answer(std::string_view question,
                   const std::vector<std::string>& retrieved_texts) {
  std::string quotes;
  for (std::size_t i = 0; i < retrieved_texts.size(); ++i) {
    if (i > 0) quotes += "\n\n";
    quotes += retrieved_texts[i];
  }
  return render(kAnswer, {{"quotes", quotes}, {"question", std::string(question)}});
}

std::string judge(std::string_view question, std::string_view ground_truth,
                  std::string_view answer_1, std::string_view answer_2) {
  return render(kJudge, {{"question", std::string(question)},
                         {"ground_truth_answer", std::string(ground_truth)},
                         {"answer_1", std::string(answer_1)},
                         {"answer_2", std::string(answer_2)}});
}

}  // namespace mcidx::prompts
