#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace textnet {

struct ManifestEntry {
    std::string author;
    std::string document_id;
    std::string path;
};

// Labeled corpus layout. Paths are resolved relative to the manifest file.
struct CorpusManifest {
    std::vector<ManifestEntry> entries;
};

// Reads a CSV manifest with header `author,document_id,path` and validates
// it (non-empty, unique document ids).
CorpusManifest read_manifest(const std::filesystem::path& path);

struct RawDocument {
    std::string author;
    std::string document_id;
    std::string text;
};

// One raw text per manifest entry, in manifest order. Missing or unreadable
// files raise DataError naming the path.
std::vector<RawDocument> load_corpus(const CorpusManifest& manifest);

struct Token {
    std::string lemma;
    int position = 0;  // index into the pre-filtering token sequence
};

struct TokenStream {
    std::string document_id;
    std::vector<Token> tokens;
    int original_length = 0;
};

struct StopwordList {
    std::unordered_set<std::string> words;  // stored lowercase

    bool contains(const std::string& word) const { return words.count(word) != 0; }
    static StopwordList from_file(const std::filesystem::path& path);
};

// Surface form -> lemma map with identity fallback for unknown forms.
struct LemmaLexicon {
    std::unordered_map<std::string, std::string> forms;

    const std::string& lemma_of(const std::string& surface) const {
        auto it = forms.find(surface);
        return it == forms.end() ? surface : it->second;
    }
    // Two tab-separated columns `surface<TAB>lemma`; later entries win.
    static LemmaLexicon from_file(const std::filesystem::path& path);
};

// Lowercase word tokens: runs of letters with internal apostrophes and single
// hyphens kept, digits and punctuation acting as separators. Bytes >= 0x80
// are treated as letters so UTF-8 words survive intact (no case folding
// beyond ASCII).
std::vector<std::string> tokenize(std::string_view text);

// Like tokenize, but also records which token index begins each input line,
// for the sentence-delimited network construction flag (expects one sentence
// per line).
struct TokenizedText {
    std::vector<std::string> tokens;
    std::vector<int> sentence_starts;  // token indices; first is always 0
};
TokenizedText tokenize_sentences(std::string_view text);

// Drops stopwords, maps survivors through the lexicon, and records each
// survivor's index in the input token list.
TokenStream preprocess(const std::vector<std::string>& tokens,
                       const StopwordList& stops,
                       const LemmaLexicon& lexicon,
                       std::string document_id);

// Pre-lemmatized input alternative: one `lemma<TAB>position` per line.
// original_length is recovered as last position + 1.
TokenStream read_token_stream(const std::filesystem::path& path, std::string document_id);
void write_token_stream(const TokenStream& stream, const std::filesystem::path& path);

}  // namespace textnet
