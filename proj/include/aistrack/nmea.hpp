#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aistrack {

/// One framed `!AIVDM` / `!AIVDO` sentence.
struct RawSentence {
  std::string talker;  // "AIVDM" or "AIVDO"
  int fragment_count = 1;
  int fragment_index = 1;
  std::optional<int> sequence_id;
  std::optional<char> channel;
  std::string payload;  // 6-bit armored
  int fill_bits = 0;
  std::uint8_t checksum = 0;

  friend bool operator==(const RawSentence&, const RawSentence&) = default;
};

/// NMEA 4.0 tag block fields we care about (`\c:<unix>,s:<station>*hh\`).
struct TagBlock {
  std::optional<double> unix_time;
  std::optional<std::string> station;
};

/// XOR of every byte in `body` (the characters between the introducer and `*`).
std::uint8_t nmea_checksum(std::string_view body) noexcept;

RawSentence parse_sentence(std::string_view line);

/// Serializes the fields back into sentence text, checksum recomputed.
std::string to_string(const RawSentence& s);

/// Splits an optional leading tag block off `line`. The returned view points
/// into `line`.
std::pair<TagBlock, std::string_view> split_tag_block(std::string_view line);

/// MSB-first bit string decoded from 6-bit armor.
class BitPayload {
 public:
  BitPayload() = default;
  explicit BitPayload(std::size_t bit_count) : bits_((bit_count + 7) / 8, 0), size_(bit_count) {}

  std::size_t size() const noexcept { return size_; }

  std::uint64_t get_unsigned(std::size_t offset, unsigned width) const;
  std::int64_t get_signed(std::size_t offset, unsigned width) const;
  std::string get_text(std::size_t offset, unsigned width) const;

  void set_unsigned(std::size_t offset, unsigned width, std::uint64_t value);
  void set_text(std::size_t offset, unsigned width, std::string_view text);

  void append(const BitPayload& other);
  void truncate(std::size_t bit_count);

  friend bool operator==(const BitPayload&, const BitPayload&) = default;

 private:
  bool bit(std::size_t i) const noexcept { return (bits_[i >> 3] >> (7 - (i & 7))) & 1U; }

  std::vector<std::uint8_t> bits_;
  std::size_t size_ = 0;
};

/// Decodes 6-bit armor, dropping `fill_bits` from the tail.
BitPayload dearmor(std::string_view payload, int fill_bits);

struct Armored {
  std::string payload;
  int fill_bits = 0;
};
Armored armor(const BitPayload& bits);

/// Concatenates the fragments of one multipart message.
/// Throws MissingFragment / DuplicateFragment when indices 1..count are not
/// covered exactly once.
BitPayload assemble(std::span<const RawSentence> fragments);

/// Splits `bits` into sentences carrying at most `max_chars` payload chars.
std::vector<RawSentence> make_sentences(const BitPayload& bits, std::optional<int> sequence_id,
                                        std::optional<char> channel, std::string talker = "AIVDM",
                                        std::size_t max_chars = 60);

/// Streaming multipart buffer. Incomplete groups are keyed by
/// (channel, sequence_id) and evicted least-recently-used beyond `capacity`.
class FragmentAssembler {
 public:
  struct Completed {
    BitPayload payload;
    std::vector<RawSentence> fragments;
    std::uint64_t tag = 0;  // tag of the first fragment
  };

  explicit FragmentAssembler(std::size_t capacity = 64) : capacity_(capacity) {}

  /// Returns the assembled message once the group of `s` is complete.
  /// Fragments of abandoned groups (restart on a repeated index, LRU
  /// eviction) are counted in `discarded_fragments()`.
  std::optional<Completed> push(RawSentence s, std::uint64_t tag = 0);

  std::size_t pending_groups() const noexcept { return groups_.size(); }
  std::size_t pending_fragments() const noexcept;
  std::size_t discarded_fragments() const noexcept { return discarded_; }

 private:
  struct Group {
    char channel;
    int sequence_id;
    int fragment_count;
    std::vector<std::optional<RawSentence>> parts;
    std::uint64_t tag = 0;

    std::size_t present() const noexcept;
  };

  std::list<Group> groups_;  // most recent at front
  std::size_t capacity_;
  std::size_t discarded_ = 0;
};

}  // namespace aistrack
