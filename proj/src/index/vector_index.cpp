#include "emsrag/index/vector_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "emsrag/common/error.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/corpus/json_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "index file format assumes a little-endian host");

namespace emsrag::index {

namespace {

constexpr char kMagic[8] = {'E', 'M', 'S', 'R', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

double dot(std::span<const float> u, std::span<const float> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += static_cast<double>(u[i]) * v[i];
    return acc;
}

std::vector<float> normalized(std::span<const float> vec, const char* what) {
    const double norm = std::sqrt(dot(vec, vec));
    if (!(norm > 0.0)) throw ZeroVector(std::string(what) + " has zero norm");
    std::vector<float> out(vec.begin(), vec.end());
    for (auto& v : out) v = static_cast<float>(v / norm);
    return out;
}

}  // namespace

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size())
        throw DimensionMismatch("cosine_similarity: " + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
    const double nu = std::sqrt(dot(u, u));
    const double nv = std::sqrt(dot(v, v));
    if (!(nu > 0.0) || !(nv > 0.0)) throw ZeroVector("cosine_similarity: zero-norm input");
    return dot(u, v) / (nu * nv);
}

VectorIndex::VectorIndex(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("VectorIndex: dim must be positive");
}

void VectorIndex::insert(const std::string& id, std::span<const float> vec,
                         corpus::SubjectArea subject, corpus::CorpusTag corpus) {
    if (frozen_) throw std::invalid_argument("VectorIndex: insert after freeze");
    if (static_cast<int>(vec.size()) != dim_)
        throw DimensionMismatch("insert '" + id + "': dim " + std::to_string(vec.size()) +
                                ", index dim " + std::to_string(dim_));
    if (by_id_.count(id) > 0) throw std::invalid_argument("VectorIndex: duplicate id " + id);

    const std::vector<float> unit = normalized(vec, "inserted vector");
    by_id_.emplace(id, entries_.size());
    entries_.push_back(Entry{id, subject, corpus});
    data_.insert(data_.end(), unit.begin(), unit.end());
}

std::vector<SearchHit> VectorIndex::search(std::span<const float> query, std::size_t k,
                                           const SearchPredicate* predicate) const {
    if (k == 0) throw std::invalid_argument("VectorIndex::search: k must be >= 1");
    if (entries_.empty()) throw EmptyIndex("VectorIndex::search on empty index");
    if (static_cast<int>(query.size()) != dim_)
        throw DimensionMismatch("query dim " + std::to_string(query.size()) + ", index dim " +
                                std::to_string(dim_));
    const std::vector<float> q = normalized(query, "query vector");

    std::vector<SearchHit> hits;
    hits.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        if (predicate != nullptr && !predicate->matches(e.subject, e.corpus)) continue;
        hits.push_back(SearchHit{e.id, dot(q, vector(i))});
    }
    const std::size_t take = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(take), hits.end(),
                      [](const SearchHit& a, const SearchHit& b) {
                          if (a.score != b.score) return a.score > b.score;
                          return a.id < b.id;
                      });
    hits.resize(take);
    return hits;
}

void VectorIndex::save(const std::filesystem::path& path) const {
    std::string blob;
    blob.reserve(24 + data_.size() * sizeof(float));
    blob.append(kMagic, sizeof(kMagic));
    const std::uint32_t version = kFormatVersion;
    const std::uint32_t dim = static_cast<std::uint32_t>(dim_);
    const std::uint64_t count = entries_.size();
    blob.append(reinterpret_cast<const char*>(&version), sizeof(version));
    blob.append(reinterpret_cast<const char*>(&dim), sizeof(dim));
    blob.append(reinterpret_cast<const char*>(&count), sizeof(count));
    blob.append(reinterpret_cast<const char*>(data_.data()), data_.size() * sizeof(float));
    jsonl::write_text_atomic(path, blob);

    std::vector<nlohmann::json> rows;
    rows.reserve(entries_.size());
    for (const auto& e : entries_)
        rows.push_back(nlohmann::json{{"id", e.id},
                                      {"subject", corpus::subject_id(e.subject)},
                                      {"corpus", corpus::corpus_tag_name(e.corpus)}});
    jsonl::write_file(path.string() + ".meta.jsonl", rows);
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index file " + path.string());
    char magic[8];
    std::uint32_t version = 0;
    std::uint32_t dim = 0;
    std::uint64_t count = 0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError(path.string() + ": not an index file");
    if (version != kFormatVersion)
        throw IoError(path.string() + ": unsupported index version " + std::to_string(version));

    VectorIndex index(static_cast<int>(dim));
    index.data_.resize(count * dim);
    in.read(reinterpret_cast<char*>(index.data_.data()),
            static_cast<std::streamsize>(index.data_.size() * sizeof(float)));
    if (!in) throw IoError(path.string() + ": truncated vector data");

    const auto meta = jsonl::read_file(path.string() + ".meta.jsonl");
    if (meta.size() != count)
        throw IoError(path.string() + ": sidecar has " + std::to_string(meta.size()) +
                      " rows, header says " + std::to_string(count));
    index.entries_.reserve(count);
    for (const auto& row : meta) {
        Entry e;
        e.id = row.at("id").get<std::string>();
        const auto subject = corpus::subject_from_string(row.at("subject").get<std::string>());
        const auto tag = corpus::corpus_tag_from_string(row.at("corpus").get<std::string>());
        if (!subject || !tag) throw IoError(path.string() + ": bad sidecar row for id " + e.id);
        e.subject = *subject;
        e.corpus = *tag;
        if (index.by_id_.count(e.id) > 0)
            throw IoError(path.string() + ": duplicate id in sidecar: " + e.id);
        index.by_id_.emplace(e.id, index.entries_.size());
        index.entries_.push_back(std::move(e));
    }
    index.freeze();
    return index;
}

}  // namespace emsrag::index
