#include "practiq/prompts.hpp"

#include <map>

namespace practiq::provider {

namespace {

const std::string kSynonymColumns = R"(You will be provided with a database schema containing multiple tables and their columns.
The schema will be presented in a markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
Additionally, you will be given a column of interest and its corresponding table within <column/> XML tags, a user question, and a corresponding SQL query.

Your task is to come up with two synonyms or phrases that have the same meaning as the original column of interest.
The goal is to remove the original column of interest and add the two new columns with similar values, making the user question ambiguous.
The synonyms should not be simple changes in case, pluralization, tense, etc. Instead, they should be alternative ways of expressing the same concept.

First, write your thought process within <scratch/> XML tags, following these steps:
1. Review the provided column of interest, its corresponding table, the user question, and the SQL query to understand the context.
    a. Identify the word/phrase mention that corresponds to the column of interest from the user question.
2. Brainstorm 5 potential synonyms or phrases for the column of interest. The synonyms or phrases shall have similar lexical overlap with the word/phrase mention in the question.
3. Evaluate each synonym/phrase and select the two best options that accurately capture the meaning of the original column, considering the following criteria:
    a. The synonyms and phrases should be similar to other columns within the schema in terms of wording, length, and style.
    b. A synonym or phrase is good if it is a valid and clear/obvious interpretation of the user question and results in a new SQL query that uses that interpretation.
    c. Write out why a synonym is a good explanation of the question and what the resulting new SQL will be if you think it is a good synonym.
    Clearly explain how the synonym maps to the user question.
    d. If it is not a good synonym, explain why.

Then, write the two synonym columns within a Python list in the <result/> XML tags.
Each item within the list should be a dictionary containing the 'table' and 'column' keys, mapping to the respective table and column names.
The final two synonyms should have similar likelihoods of being the correct interpretations of what the original user question is referring to assuming the original column is interest is removed from the database.
The two synonyms or phrases shall have similar lexcial overlap with the mention in the question.
If you cannot find any suitable synonyms, output an empty Python list in the <result/> XML tags.)";

const std::string kSimilarValues = R"(You will be provided with a database schema containing multiple tables and their columns.
The schema will be presented in a markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
Additionally, you will be given a cell value of interest and its corresponding table and column within <value/> and <column/> XML tags, a user question, and a corresponding SQL query.

Your task is to come up with two values that are similar to the original value but not equivalent to each other.
The goal is to remove the original value from the column and add the two new values, so that the mention in the user question matches multiple cell values and the question becomes ambiguous.
The new values should be plausible members of the same column and should both lexically contain or closely resemble the original mention.

First, write your thought process within <scratch/> XML tags.
Then, write the two values as a Python list of strings within the <result/> XML tags.
If you cannot find suitable values, output an empty Python list in the <result/> XML tags.)";

const std::string kVaguifyQuestion = R"(You will be provided with a database schema containing multiple tables and their columns.
The schema will be presented in a markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
Additionally, you will be given a filter value of interest and its corresponding table and column within <value/> and <column/> XML tags, and a user question that mentions the value.

Your task is to rewrite the user question so that the specific filter value is replaced by a relative or descriptive term (for example "little/large", "young/old", "slow/fast", or a vague description of the value).
The rewritten question must no longer state the specific value explicitly, so that the question becomes ambiguous and requires clarification or a definition before it can be answered with SQL.
Keep the rest of the question unchanged as far as possible and keep it natural and fluent.

First, write your thought process within <scratch/> XML tags.
Then, write the rewritten question within the <result/> XML tags without any additional explanation.)";

const std::string kDisconnectedTables = R"(You will be provided with a database schema containing multiple tables and their columns.
The schema will be presented in a markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags, and the database identifier within <db/> XML tags.

Your task is to design at least two new tables with corresponding columns such that the new tables have foreign key relationships among themselves but not with any table in the existing schema.
Each new table needs a handful of plausible rows. Also write one new user question that would require joining one of the new tables with one of the original tables, which is impossible because they are not connected.

First, write your thought process within <scratch/> XML tags.
Then, write a JSON object within the <result/> XML tags with this shape:
{"tables": [{"name": ..., "columns": [{"name": ..., "col_type": "text"|"number"}], "primary_key": [...], "foreign_keys": [["child_table.column", "parent_table.column"]], "rows": [[...], ...]}], "question": "..."}
The foreign keys must reference only the new tables. Do not reuse any existing table name.)";

const std::string kFillClarification = R"(You will be presented with a database schema containing multiple tables and their columns.
The schema will be provided in a markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
After the schema, you will see a conversation between a USER and a DB EXPERT within <conversation/> XML tags.
However, the follow-up question from the user before the final SQL query will be missing.

Your task is to generate a natural, logical, and concise follow-up USER question based on the final SQL query provided by the DB EXPERT.

Write your thinking process within <scratch/> XML tags, following these steps:
1. Carefully review the database schema to understand the structure and relationships between the tables.
2. Analyze the final SQL query to comprehend the information it retrieves and the operations it performs.
3. Formulate a follow-up question that accurately reflects the intent and results of the final SQL query, without any unnecessary or redundant words.
4. Ensure that the follow-up question is natural and free from unnatural phrases, such as phrases with underlines or unnatural casing.

In the end, write the follow-up question within the <result/> XML tags without any additional explanations.)";

const std::string kRefine = R"(You will be presented with a database schema containing multiple tables and their columns.
The schema will be provided in a markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
After the schema, you will see a conversation between a USER and a DB EXPERT within <conversation/> XML tags.
The initial user question is often ambiguous or unanswerable, and the DB EXPERT explains why.
The user then asks a follow-up question that is answerable but verbose.

Your task is to rephrase the user's verbose follow-up question.
The rephrased question should convey the requested clarification (such as which column or cell value to use) in a concise, conversational, and natural way based on the context provided by the initial ambiguous question and the DB expert's explanation.
It is important not to omit any information where the DB expert has requested clarification.

The rephrased follow-up question should be clear, logical, and easy to understand, while avoiding unnecessary repetition of information from the initial conversation and technical jargon or complex words.
Do not include unnecessary filler words like "hey" or "hello".

First, think step by step in <scratch/> XML tags.
Then, write the rephrased concise follow-up question within the <result/> XML tags without any extra explanation.)";

const std::string kExplainResults = R"(You will be provided with a database schema containing multiple tables and their columns in a markdown format, along with 3 example values for each column enclosed within <schema/> XML tags.

After the schema, there will be a conversation between a USER and a DB EXPERT within <conversation/> XML tags.
The conversation will include the USER's query and the DB EXPERT's SQL query to retrieve the requested information.
At the end, the execution results of the DB EXPERT's final SQL query will be presented within <execution_results/> XML tags.

Your task is to analyze the execution results and provide a short answer to the USER's last question based on those results.
The answer should be concise, self-contained, and no more than two sentences.
Do not comment on the correctness of the query itself. Note that the short answer shall be self-explanatory becaues USER only sees the answer but not the execution results.

Your answer should be clear, logical, and easy for the USER to understand. Avoid using technical jargon or overly complex explanations.
The goal is to provide a helpful and informative answer to the USER's question.

Note that if the execution results contain more than 30 rows, only the first 30 rows will be shown, and the remaining rows will be skipped.

First, outline your thought process step by step within <scratch/> XML tags. Then, write the rephrased response within the <result/> XML tags without any additional explanation.)";

const std::string kBinaryClassification = R"(You are a Database Expert (DB EXPERT) system that classifies user questions into one of the following two categories based on the given database schema:

{category_with_explanation}

- answerable: the database contains data needed to answer the question and the question has one and only one valid interpreation.

You will receive:
1. A database schema in markdown format with relevant column values enclosed in <schema/> tags.
2. The user's question enclosed in <question/> tags.

Note that the "answerable" output shall only be provided if and only if:
- the question posed is unambiguous, precise, and leaving no room for multiple interpretations or confusion.
- the database contains the complete set of information required to formulate a comprehensive and accurate response to the query.
If either of these conditions is not met, meaning the question lacks clarity or our data is insufficient, we shall refrain from classifying the query as "answerable."

Provide your step-by-step thoughts within </scratch> tags.
Then, provide your final classification within <result/> tags as one of the categories above.
Note that you result shall only be one of the categories specified at the beginning & Do not include any extra explanation in the result. )";

const std::string kNineWayClassification = R"(You are a Database Expert (DB EXPERT) system that classifies user questions into one of the following 9 categories based on the given database schema:

{category_with_explanation}

- answerable: the database contains data needed to answer the question and the question has one and only one valid interpreation.

You will receive:
1. A database schema in markdown format with relevant column values enclosed in <schema/> tags.
2. The user's question enclosed in <question/> tags.

Your output should follow this format:
<scratch> YOUR-STEP-BY-STEP-THOUGHTS </scratch>
<result> ONE-OF-THE-9-QUESTION-CATEGORIES </result>

Note that the "answerable" output shall only be provided if and only if:
- the question posed is unambiguous, precise, and leaving no room for multiple interpretations or confusion.
- the database contains the complete set of information required to formulate a comprehensive and accurate response to the query.
If either of these conditions is not met, meaning the question lacks clarity or our data is insufficient, we shall refrain from classifying the query as "answerable."

Provide your step-by-step thoughts within </scratch> tags.
Then, provide your final classification within <result/> tags as one of the categories above. Do not include any extra explanation in the result.)";

const std::string kPredictSql = R"(You are a Database Expert (DB EXPERT) text-to-SQL system.
You will be provided with a database schema in markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
After the schema, you will see a conversation between a USER and the DB EXPERT within <conversation/> XML tags. The conversation may include a clarification exchange that resolves an ambiguity or an unanswerable request.

Your task is to predict the single SQL query that answers the user's request after taking the whole conversation into account.
Use only tables and columns that exist in the schema. Output exactly one SQL query inside a fenced code block and nothing else.)";

const std::string kPredictSqlDecomposed = R"(You are a Database Expert (DB EXPERT) text-to-SQL system that works through sub-tasks before answering.
You will be provided with a database schema in markdown format, along with 3 sample values for each column enclosed within <schema/> XML tags.
After the schema, you will see a conversation between a USER and the DB EXPERT within <conversation/> XML tags. The conversation may include a clarification exchange that resolves an ambiguity or an unanswerable request.

Work through the following steps inside <scratch/> XML tags:
1. Schema linking: list the tables, columns, and cell values from the schema that the conversation refers to.
2. Classification: decide whether the query needs joins or nesting.
3. Generation: draft the SQL for the user's clarified intent.
4. Self-correction: check the draft against the schema and fix any hallucinated tables or columns.

Then output exactly one final SQL query inside a fenced code block and nothing else after the scratch section.)";

const std::string kRankCandidates = R"(You will be given a list of candidate strings within <candidates/> XML tags, one candidate per line.
Rank the candidates from best to worst for the described task context.
Write the ranked candidates as a JSON list of strings within the <result/> XML tags.)";

}  // namespace

const std::string& system_prompt_for(ProviderTask task) {
  switch (task) {
    case ProviderTask::SynonymColumns: return kSynonymColumns;
    case ProviderTask::SimilarValues: return kSimilarValues;
    case ProviderTask::VaguifyQuestion: return kVaguifyQuestion;
    case ProviderTask::DisconnectedTables: return kDisconnectedTables;
    case ProviderTask::FillClarification: return kFillClarification;
    case ProviderTask::Refine: return kRefine;
    case ProviderTask::ExplainResults: return kExplainResults;
    case ProviderTask::BinaryCategoryCheck: return kBinaryClassification;
    case ProviderTask::NineWayClassify: return kNineWayClassification;
    case ProviderTask::PredictSql: return kPredictSql;
    case ProviderTask::RankCandidates: return kRankCandidates;
  }
  return kSynonymColumns;
}

const std::string& category_definition(CategoryLabel category) {
  static const std::map<CategoryLabel, std::string> defs = {
      {CategoryLabel::AmbiguousSelectColumn,
       "Multiple columns match the requested output information, leading to multiple valid SQLs "
       "that differ in the columns used in the SELECT clause."},
      {CategoryLabel::AmbiguousWhereColumn,
       "The filter condition matches multiple columns in a table, leading to multiple valid SQLs "
       "that differ in the specific filter column in the WHERE clause."},
      {CategoryLabel::AmbiguousValuesWithinColumn,
       "Multiple similar values in a column match the mentioned value, leading to multiple valid "
       "SQLs that differ in the specific filtering cell value from one column in the WHERE "
       "clause."},
      {CategoryLabel::AmbiguousFilterCriteria,
       "The question contains a filter condition or criteria that is ambiguous, vague, "
       "relative/descriptive, or open to multiple interpretations. This ambiguity in the filter "
       "criteria makes it difficult to formulate a precise SQL query without additional "
       "clarification."},
      {CategoryLabel::NonexistentSelectColumn,
       "At least one of the requested output information is not present in the schema, so no SQL "
       "can be constructed with the appropriate column in the SELECT clause."},
      {CategoryLabel::NonexistentWhereColumn,
       "At least one filter condition column is not present in the schema, so no SQL can be "
       "constructed with the appropriate column in the WHERE clause"},
      {CategoryLabel::UnsupportedJoin,
       "The required join between tables is not supported due to a lack of common columns, "
       "preventing the construction of a valid SQL query"},
      {CategoryLabel::NonexistentFilterValue,
       "The mentioned filtering value is not present in the schema, so no SQL can be constructed "
       "with the appropriate value in the WHERE clause."},
      {CategoryLabel::Answerable,
       "the database contains data needed to answer the question and the question has one and "
       "only one valid interpreation."},
  };
  return defs.at(category);
}

std::string all_category_definitions() {
  // prompt order: the four ambiguous, then the four unanswerable
  static const CategoryLabel order[] = {
      CategoryLabel::AmbiguousSelectColumn,   CategoryLabel::AmbiguousWhereColumn,
      CategoryLabel::AmbiguousValuesWithinColumn, CategoryLabel::AmbiguousFilterCriteria,
      CategoryLabel::NonexistentSelectColumn, CategoryLabel::NonexistentWhereColumn,
      CategoryLabel::UnsupportedJoin,         CategoryLabel::NonexistentFilterValue,
  };
  std::string out;
  for (CategoryLabel c : order) {
    out += "- ";
    out += to_token(c);
    out += ": ";
    out += category_definition(c);
    out += "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

namespace {
std::string fill_slot(std::string prompt, const std::string& definitions) {
  const std::string slot = "{category_with_explanation}";
  auto pos = prompt.find(slot);
  if (pos != std::string::npos) prompt.replace(pos, slot.size(), definitions);
  return prompt;
}
}  // namespace

std::string binary_classification_prompt(CategoryLabel category) {
  std::string def =
      std::string("- ") + to_token(category) + ": " + category_definition(category);
  return fill_slot(kBinaryClassification, def);
}

std::string nine_way_classification_prompt() {
  return fill_slot(kNineWayClassification, all_category_definitions());
}

/// Exposed for the SQL-prediction strategies.
const std::string& predict_sql_prompt(bool decomposed) {
  return decomposed ? kPredictSqlDecomposed : kPredictSql;
}

}  // namespace practiq::provider
