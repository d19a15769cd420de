#include "aistrack/nmea.hpp"

#include <algorithm>
#include <charconv>

#include "aistrack/error.hpp"

namespace aistrack {

namespace {

constexpr std::string_view kHex = "0123456789ABCDEF";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<int> parse_int(std::string_view field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

int sextet(char c) {
  int v = static_cast<unsigned char>(c) - 48;
  if (v < 0 || v > 71 || (v > 39 && v < 48)) return -1;
  return v > 40 ? v - 8 : v;
}

char armor_char(unsigned v) { return static_cast<char>(v < 40 ? v + 48 : v + 56); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::uint8_t read_checksum(std::string_view digits, std::string_view line) {
  if (digits.size() < 2) throw Error(ErrorCode::MalformedFraming, "missing checksum in '" + std::string(line) + "'");
  int hi = hex_value(digits[0]);
  int lo = hex_value(digits[1]);
  if (hi < 0 || lo < 0) throw Error(ErrorCode::MalformedFraming, "bad checksum digits in '" + std::string(line) + "'");
  return static_cast<std::uint8_t>(hi * 16 + lo);
}

}  // namespace

std::uint8_t nmea_checksum(std::string_view body) noexcept {
  std::uint8_t x = 0;
  for (char c : body) x ^= static_cast<std::uint8_t>(c);
  return x;
}

RawSentence parse_sentence(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.front() != '!')
    throw Error(ErrorCode::MalformedFraming, "sentence must start with '!'");
  const auto star = line.rfind('*');
  if (star == std::string_view::npos) throw Error(ErrorCode::MalformedFraming, "missing '*'");
  const std::string_view body = line.substr(1, star - 1);
  const std::string_view talker = body.substr(0, body.find(','));
  if (talker != "AIVDM" && talker != "AIVDO")
    throw Error(ErrorCode::UnknownTalker, std::string(talker));

  const std::uint8_t expected = read_checksum(line.substr(star + 1), line);
  if (line.size() != star + 3) throw Error(ErrorCode::MalformedFraming, "trailing characters after checksum");
  if (nmea_checksum(body) != expected)
    throw Error(ErrorCode::ChecksumMismatch, std::string(line));

  std::string_view fields[7];
  std::size_t n = 0;
  std::string_view rest = body;
  while (true) {
    const auto comma = rest.find(',');
    if (n == 7) throw Error(ErrorCode::MalformedFraming, "too many fields");
    fields[n++] = rest.substr(0, comma);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (n != 7) throw Error(ErrorCode::MalformedFraming, "expected 7 fields, got " + std::to_string(n));

  RawSentence s;
  s.talker = std::string(talker);
  s.checksum = expected;
  auto count = parse_int(fields[1]);
  auto index = parse_int(fields[2]);
  if (!count || !index || *count < 1 || *index < 1 || *index > *count || *count > 9)
    throw Error(ErrorCode::MalformedFraming, "bad fragment numbering");
  s.fragment_count = *count;
  s.fragment_index = *index;
  if (!fields[3].empty()) {
    auto seq = parse_int(fields[3]);
    if (!seq || *seq < 0 || *seq > 9) throw Error(ErrorCode::MalformedFraming, "bad sequence id");
    s.sequence_id = *seq;
  }
  if (fields[4].size() > 1) throw Error(ErrorCode::MalformedFraming, "bad channel");
  if (fields[4].size() == 1) s.channel = fields[4][0];
  for (char c : fields[5])
    if (sextet(c) < 0) throw Error(ErrorCode::MalformedFraming, "invalid armor character");
  s.payload = std::string(fields[5]);
  auto fill = parse_int(fields[6]);
  if (!fill || *fill < 0 || *fill > 5) throw Error(ErrorCode::MalformedFraming, "bad fill bits");
  s.fill_bits = *fill;
  return s;
}

namespace {

std::string sentence_body(const RawSentence& s) {
  std::string body = s.talker;
  body += ',';
  body += std::to_string(s.fragment_count);
  body += ',';
  body += std::to_string(s.fragment_index);
  body += ',';
  if (s.sequence_id) body += std::to_string(*s.sequence_id);
  body += ',';
  if (s.channel) body += *s.channel;
  body += ',';
  body += s.payload;
  body += ',';
  body += std::to_string(s.fill_bits);
  return body;
}

}  // namespace

std::string to_string(const RawSentence& s) {
  const std::string body = sentence_body(s);
  const std::uint8_t cs = nmea_checksum(body);
  std::string out = "!" + body + "*";
  out += kHex[cs >> 4];
  out += kHex[cs & 0xF];
  return out;
}

std::pair<TagBlock, std::string_view> split_tag_block(std::string_view line) {
  TagBlock tag;
  line = trim(line);
  if (line.empty() || line.front() != '\\') return {tag, line};
  const auto close = line.find('\\', 1);
  if (close == std::string_view::npos) throw Error(ErrorCode::MalformedFraming, "unterminated tag block");
  const std::string_view block = line.substr(1, close - 1);
  const auto star = block.rfind('*');
  if (star == std::string_view::npos) throw Error(ErrorCode::MalformedFraming, "tag block without checksum");
  const std::string_view body = block.substr(0, star);
  if (nmea_checksum(body) != read_checksum(block.substr(star + 1), line))
    throw Error(ErrorCode::ChecksumMismatch, "tag block");

  std::string_view rest = body;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    if (item.size() > 2 && item[1] == ':') {
      const std::string_view value = item.substr(2);
      if (item[0] == 'c') {
        double t = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), t);
        if (ec != std::errc{} || ptr != value.data() + value.size())
          throw Error(ErrorCode::MalformedFraming, "bad tag block time");
        // Some receivers stamp milliseconds.
        tag.unix_time = t > 1e11 ? t / 1000.0 : t;
      } else if (item[0] == 's') {
        tag.station = std::string(value);
      }
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return {tag, line.substr(close + 1)};
}

std::uint64_t BitPayload::get_unsigned(std::size_t offset, unsigned width) const {
  if (width > 64 || offset + width > size_)
    throw Error(ErrorCode::TruncatedPayload, "read past end of payload");
  std::uint64_t v = 0;
  for (std::size_t i = offset; i < offset + width; ++i) v = (v << 1) | (bit(i) ? 1U : 0U);
  return v;
}

std::int64_t BitPayload::get_signed(std::size_t offset, unsigned width) const {
  const std::uint64_t raw = get_unsigned(offset, width);
  if (width == 0) return 0;
  if (width < 64 && (raw >> (width - 1)) & 1U) return static_cast<std::int64_t>(raw) - (std::int64_t{1} << width);
  return static_cast<std::int64_t>(raw);
}

std::string BitPayload::get_text(std::size_t offset, unsigned width) const {
  std::string out;
  for (unsigned i = 0; i + 6 <= width; i += 6) {
    const auto v = static_cast<unsigned>(get_unsigned(offset + i, 6));
    out += static_cast<char>(v < 32 ? v + 64 : v);
  }
  while (!out.empty() && (out.back() == '@' || out.back() == ' ')) out.pop_back();
  if (const auto at = out.find('@'); at != std::string::npos) out.resize(at);
  return out;
}

void BitPayload::set_unsigned(std::size_t offset, unsigned width, std::uint64_t value) {
  if (width > 64 || offset + width > size_) throw Error(ErrorCode::InvalidArgument, "write past end of payload");
  for (unsigned k = 0; k < width; ++k) {
    const std::size_t i = offset + k;
    const bool b = (value >> (width - 1 - k)) & 1U;
    const auto mask = static_cast<std::uint8_t>(1U << (7 - (i & 7)));
    if (b)
      bits_[i >> 3] |= mask;
    else
      bits_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }
}

void BitPayload::set_text(std::size_t offset, unsigned width, std::string_view text) {
  for (unsigned i = 0, c = 0; i + 6 <= width; i += 6, ++c) {
    unsigned v = 0;  // '@' padding
    if (c < text.size()) {
      const auto ch = static_cast<unsigned char>(text[c]);
      v = ch >= 64 ? ch - 64 : ch;
      v &= 0x3F;
    }
    set_unsigned(offset + i, 6, v);
  }
}

void BitPayload::append(const BitPayload& other) {
  const std::size_t start = size_;
  size_ += other.size_;
  bits_.resize((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < other.size_; ++i) set_unsigned(start + i, 1, other.bit(i) ? 1U : 0U);
}

void BitPayload::truncate(std::size_t bit_count) {
  if (bit_count >= size_) return;
  size_ = bit_count;
  bits_.resize((size_ + 7) / 8);
  if (size_ & 7) bits_.back() &= static_cast<std::uint8_t>(0xFF << (8 - (size_ & 7)));
}

BitPayload dearmor(std::string_view payload, int fill_bits) {
  BitPayload bits(payload.size() * 6);
  std::size_t offset = 0;
  for (char c : payload) {
    const int v = sextet(c);
    if (v < 0) throw Error(ErrorCode::MalformedFraming, "invalid armor character");
    bits.set_unsigned(offset, 6, static_cast<unsigned>(v));
    offset += 6;
  }
  if (fill_bits < 0 || static_cast<std::size_t>(fill_bits) > bits.size())
    throw Error(ErrorCode::MalformedFraming, "fill bits exceed payload");
  bits.truncate(bits.size() - static_cast<std::size_t>(fill_bits));
  return bits;
}

Armored armor(const BitPayload& bits) {
  Armored out;
  const std::size_t chars = (bits.size() + 5) / 6;
  out.fill_bits = static_cast<int>(chars * 6 - bits.size());
  out.payload.reserve(chars);
  for (std::size_t c = 0; c < chars; ++c) {
    const std::size_t offset = c * 6;
    const unsigned avail = static_cast<unsigned>(std::min<std::size_t>(6, bits.size() - offset));
    auto v = static_cast<unsigned>(bits.get_unsigned(offset, avail)) << (6 - avail);
    out.payload += armor_char(v);
  }
  return out;
}

BitPayload assemble(std::span<const RawSentence> fragments) {
  if (fragments.empty()) throw Error(ErrorCode::MissingFragment, "no fragments");
  const int count = fragments.front().fragment_count;
  std::vector<const RawSentence*> ordered(static_cast<std::size_t>(count), nullptr);
  for (const auto& f : fragments) {
    if (f.fragment_count != count || f.sequence_id != fragments.front().sequence_id)
      throw Error(ErrorCode::MissingFragment, "fragments belong to different messages");
    auto& slot = ordered[static_cast<std::size_t>(f.fragment_index - 1)];
    if (slot != nullptr)
      throw Error(ErrorCode::DuplicateFragment, "fragment " + std::to_string(f.fragment_index));
    slot = &f;
  }
  BitPayload out;
  for (int i = 0; i < count; ++i) {
    const RawSentence* f = ordered[static_cast<std::size_t>(i)];
    if (f == nullptr) throw Error(ErrorCode::MissingFragment, "fragment " + std::to_string(i + 1));
    // Fill bits only ever pad the final fragment.
    out.append(dearmor(f->payload, i + 1 == count ? f->fill_bits : 0));
  }
  return out;
}

std::vector<RawSentence> make_sentences(const BitPayload& bits, std::optional<int> sequence_id,
                                        std::optional<char> channel, std::string talker,
                                        std::size_t max_chars) {
  const Armored a = armor(bits);
  const std::size_t n = std::max<std::size_t>(1, (a.payload.size() + max_chars - 1) / max_chars);
  std::vector<RawSentence> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RawSentence s;
    s.talker = talker;
    s.fragment_count = static_cast<int>(n);
    s.fragment_index = static_cast<int>(i + 1);
    if (n > 1) s.sequence_id = sequence_id;
    s.channel = channel;
    s.payload = a.payload.substr(i * max_chars, max_chars);
    s.fill_bits = i + 1 == n ? a.fill_bits : 0;
    s.checksum = nmea_checksum(sentence_body(s));
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t FragmentAssembler::Group::present() const noexcept {
  return static_cast<std::size_t>(std::count_if(parts.begin(), parts.end(), [](const auto& p) { return p.has_value(); }));
}

std::size_t FragmentAssembler::pending_fragments() const noexcept {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.present();
  return n;
}

std::optional<FragmentAssembler::Completed> FragmentAssembler::push(RawSentence s, std::uint64_t tag) {
  if (s.fragment_count == 1) {
    Completed done;
    done.payload = dearmor(s.payload, s.fill_bits);
    done.tag = tag;
    done.fragments.push_back(std::move(s));
    return done;
  }

  const char channel = s.channel.value_or('\0');
  const int seq = s.sequence_id.value_or(-1);
  auto it = std::find_if(groups_.begin(), groups_.end(),
                         [&](const Group& g) { return g.channel == channel && g.sequence_id == seq; });

  const auto idx = static_cast<std::size_t>(s.fragment_index - 1);
  if (it != groups_.end() && (it->fragment_count != s.fragment_count || it->parts[idx].has_value())) {
    // Sequence ids are reused; a clash means the previous message never completed.
    discarded_ += it->present();
    groups_.erase(it);
    it = groups_.end();
  }
  if (it == groups_.end()) {
    groups_.push_front(Group{channel, seq, s.fragment_count,
                             std::vector<std::optional<RawSentence>>(static_cast<std::size_t>(s.fragment_count)), tag});
    it = groups_.begin();
    if (groups_.size() > capacity_) {
      discarded_ += groups_.back().present();
      groups_.pop_back();
    }
  } else if (it != groups_.begin()) {
    groups_.splice(groups_.begin(), groups_, it);
    it = groups_.begin();
  }
  if (s.fragment_index == 1) it->tag = tag;
  it->parts[idx] = std::move(s);

  if (!std::all_of(it->parts.begin(), it->parts.end(), [](const auto& p) { return p.has_value(); }))
    return std::nullopt;

  Completed done;
  done.tag = it->tag;
  for (auto& p : it->parts) done.fragments.push_back(std::move(*p));
  groups_.erase(it);
  done.payload = assemble(done.fragments);
  return done;
}

}  // namespace aistrack
