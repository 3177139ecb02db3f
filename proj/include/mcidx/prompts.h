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

// Prompt templates for the LLM-backed steps. Placeholders are `$name`;
// substituted values are inserted literally and never re-expanded.

#ifndef MCIDX_PROMPTS_H_
#define MCIDX_PROMPTS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mcidx::prompts {

extern const std::string_view kQuestionGeneration;  // $text, $count
extern const std::string_view kSummary;             // $section_name, $section_text
extern const std::string_view kKeywords;            // $section_name, $section_text
extern const std::string_view kAnswer;              // $quotes, $question
extern const std::string_view kJudge;  // $question, $ground_truth_answer, $answer_1, $answer_2

// Throws kInvalidArgument when the template names a placeholder that has no
// value.
std::string render(std::string_view tmpl,
                   const std::map<std::string, std::string, std::less<>>& values);

std::string question_generation(std::string_view section_text, int count);
std::string summary(std::string_view section_name, std::string_view section_text);
std::string keywords(std::string_view section_name, std::string_view section_text);
// Retrieved texts are joined with a blank line, in the given order.
std::string answer(std::string_view question,
                   const std::vector<std::string>& retrieved_texts);
std::string judge(std::string_view question, std::string_view ground_truth,
                  std::string_view answer_1, std::string_view answer_2);

}  // namespace mcidx::prompts

#endif  // MCIDX_PROMPTS_H_
