#include "textnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "textnet/csv.hpp"
#include "textnet/error.hpp"

namespace textnet {

static std::string lowercase_ascii(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
    auto rows = csv::read(path);
    if (rows.empty()) throw DataError("empty manifest: " + path.string());
    const std::vector<std::string> expected = {"author", "document_id", "path"};
    if (rows[0] != expected)
        throw DataError("manifest header must be `author,document_id,path`: " + path.string());
    CorpusManifest manifest;
    std::unordered_set<std::string> seen;
    auto base = path.parent_path();
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3)
            throw DataError("manifest row " + std::to_string(i + 1) + " needs 3 fields");
        ManifestEntry e{rows[i][0], rows[i][1], rows[i][2]};
        if (e.author.empty() || e.document_id.empty() || e.path.empty())
            throw DataError("manifest row " + std::to_string(i + 1) + " has an empty field");
        if (!seen.insert(e.document_id).second)
            throw DataError("duplicate document id in manifest: " + e.document_id);
        std::filesystem::path p(e.path);
        if (p.is_relative()) p = base / p;
        e.path = p.string();
        manifest.entries.push_back(std::move(e));
    }
    if (manifest.entries.empty()) throw DataError("manifest has no entries: " + path.string());
    return manifest;
}

static std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<RawDocument> load_corpus(const CorpusManifest& manifest) {
    if (manifest.entries.empty()) throw DataError("empty manifest");
    std::vector<RawDocument> docs;
    docs.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries)
        docs.push_back({e.author, e.document_id, read_file_bytes(e.path)});
    return docs;
}

StopwordList StopwordList::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stopword file: " + path.string());
    StopwordList list;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        list.words.insert(lowercase_ascii(line.substr(start)));
    }
    return list;
}

LemmaLexicon LemmaLexicon::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file: " + path.string());
    LemmaLexicon lex;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw DataError("lexicon line " + std::to_string(line_no) +
                            " is not `surface<TAB>lemma`: " + path.string());
        lex.forms[lowercase_ascii(line.substr(0, tab))] = lowercase_ascii(line.substr(tab + 1));
    }
    return lex;
}

static bool is_letter_byte(unsigned char c) {
    return std::isalpha(c) || c >= 0x80;
}

// Normalizes a raw run of [letter ' -] characters into zero or more tokens:
// runs of 2+ hyphens split words, leading/trailing joiners are trimmed, and
// anything left without a letter is dropped.
static void emit_run(const std::string& run, std::vector<std::string>& out) {
    size_t i = 0;
    while (i < run.size()) {
        size_t j = i;
        std::string piece;
        while (j < run.size()) {
            if (run[j] == '-' && j + 1 < run.size() && run[j + 1] == '-') {
                while (j < run.size() && run[j] == '-') ++j;
                break;
            }
            piece += run[j];
            ++j;
        }
        size_t a = piece.find_first_not_of("'-");
        size_t b = piece.find_last_not_of("'-");
        if (a != std::string::npos) {
            piece = piece.substr(a, b - a + 1);
            bool has_letter = std::any_of(piece.begin(), piece.end(), [](char c) {
                return is_letter_byte(static_cast<unsigned char>(c));
            });
            if (has_letter) out.push_back(lowercase_ascii(piece));
        }
        i = j;
    }
}

static void tokenize_into(std::string_view text, std::vector<std::string>& out,
                          std::vector<int>* line_starts) {
    std::string run;
    bool at_line_start = true;
    for (size_t i = 0; i < text.size(); ++i) {
        unsigned char c = text[i];
        // normalize the typographic apostrophe U+2019
        if (c == 0xe2 && i + 2 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            static_cast<unsigned char>(text[i + 2]) == 0x99) {
            run += '\'';
            i += 2;
            continue;
        }
        if (is_letter_byte(c) || c == '\'' || c == '-') {
            if (at_line_start && line_starts) {
                line_starts->push_back(static_cast<int>(out.size()));
                at_line_start = false;
            }
            run += static_cast<char>(c);
        } else {
            if (!run.empty()) {
                emit_run(run, out);
                run.clear();
            }
            if (c == '\n') at_line_start = true;
        }
    }
    if (!run.empty()) emit_run(run, out);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    tokenize_into(text, tokens, nullptr);
    return tokens;
}

TokenizedText tokenize_sentences(std::string_view text) {
    TokenizedText result;
    std::vector<int> starts;
    tokenize_into(text, result.tokens, &starts);
    // keep only starts that actually begin a token, dedup ascending
    for (int s : starts) {
        if (s < static_cast<int>(result.tokens.size()) &&
            (result.sentence_starts.empty() || result.sentence_starts.back() != s))
            result.sentence_starts.push_back(s);
    }
    if (!result.tokens.empty() &&
        (result.sentence_starts.empty() || result.sentence_starts.front() != 0))
        result.sentence_starts.insert(result.sentence_starts.begin(), 0);
    return result;
}

TokenStream preprocess(const std::vector<std::string>& tokens,
                       const StopwordList& stops,
                       const LemmaLexicon& lexicon,
                       std::string document_id) {
    TokenStream stream;
    stream.document_id = std::move(document_id);
    stream.original_length = static_cast<int>(tokens.size());
    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        if (stops.contains(tokens[i])) continue;
        stream.tokens.push_back({lexicon.lemma_of(tokens[i]), i});
    }
    return stream;
}

TokenStream read_token_stream(const std::filesystem::path& path, std::string document_id) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open token file: " + path.string());
    TokenStream stream;
    stream.document_id = std::move(document_id);
    std::string line;
    int line_no = 0;
    int prev = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw DataError("token file line " + std::to_string(line_no) +
                            " is not `lemma<TAB>position`: " + path.string());
        std::string lemma = lowercase_ascii(line.substr(0, tab));
        int pos;
        try {
            pos = std::stoi(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw DataError("bad position on line " + std::to_string(line_no) + ": " + path.string());
        }
        if (pos <= prev)
            throw DataError("positions must be strictly increasing (line " +
                            std::to_string(line_no) + "): " + path.string());
        prev = pos;
        stream.tokens.push_back({std::move(lemma), pos});
    }
    stream.original_length = prev + 1;
    return stream;
}

void write_token_stream(const TokenStream& stream, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write token file: " + path.string());
    for (const auto& t : stream.tokens) out << t.lemma << '\t' << t.position << '\n';
}

}  // namespace textnet
