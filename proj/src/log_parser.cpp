#include "xct/log_parser.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <thread>

namespace xct {

namespace {

constexpr std::string_view kTransferPhrase = "successfuly read size from info file =";
constexpr std::string_view kReadVPhrase = "fh=0 readV";
constexpr std::string_view kReadPhrase = "req=read";
constexpr std::string_view kClosePhrase = "prefetch score";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view skip_spaces(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return s.substr(i);
}

std::string_view next_token(std::string_view& s) {
  s = skip_spaces(s);
  std::size_t i = 0;
  while (i < s.size() && !is_space(s[i])) ++i;
  std::string_view tok = s.substr(0, i);
  s = s.substr(i);
  return tok;
}

template <class Fn>
void for_each_token(std::string_view s, Fn&& fn) {
  for (std::string_view tok = next_token(s); !tok.empty(); tok = next_token(s)) {
    if (!fn(tok)) return;
  }
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::optional<ReadChunk> parse_pair(std::string_view tok) {
  const auto at = tok.find('@');
  if (at == std::string_view::npos) return std::nullopt;
  ReadChunk c;
  if (!parse_u64(tok.substr(0, at), c.size) || !parse_u64(tok.substr(at + 1), c.offset)) {
    return std::nullopt;
  }
  return c;
}

// Position just past an "open r" / "open rat" anchor that is followed by a
// whitespace-delimited token, or npos.
std::size_t find_open_anchor(std::string_view line) {
  constexpr std::string_view phrase = "open r";
  for (std::size_t pos = line.find(phrase); pos != std::string_view::npos;
       pos = line.find(phrase, pos + 1)) {
    if (pos > 0 && !is_space(line[pos - 1])) continue;
    std::size_t after = pos + phrase.size();
    if (line.substr(after).starts_with("at")) after += 2;
    if (after >= line.size() || !is_space(line[after])) continue;
    if (skip_spaces(line.substr(after)).empty()) continue;
    return after;
  }
  return std::string_view::npos;
}

std::optional<FilePath> find_path(std::string_view s) {
  std::optional<FilePath> out;
  for_each_token(s, [&](std::string_view tok) {
    if (tok.starts_with("fn=")) tok.remove_prefix(3);
    if (tok.starts_with('/')) {
      out = FilePath{std::string{tok}};
      return false;
    }
    return true;
  });
  return out;
}

std::optional<SessionKey> find_session(std::string_view line) {
  std::string_view tid, uid;
  for_each_token(line, [&](std::string_view tok) {
    if (tid.empty() && tok.starts_with("tid=")) tid = tok.substr(4);
    if (uid.empty() && tok.starts_with("uid=")) uid = tok.substr(4);
    return tid.empty() || uid.empty();
  });
  if (tid.empty() || uid.empty()) return std::nullopt;
  return SessionKey{std::string{tid}, std::string{uid}};
}

bool two_digits(std::string_view s, std::size_t at, unsigned& out) {
  if (at + 2 > s.size()) return false;
  const char a = s[at], b = s[at + 1];
  if (a < '0' || a > '9' || b < '0' || b > '9') return false;
  out = static_cast<unsigned>((a - '0') * 10 + (b - '0'));
  return true;
}

struct Prefix {
  Timestamp ts;
  SessionKey session;
};

std::variant<Timestamp, Malformed> require_timestamp(std::string_view line) {
  if (auto ts = parse_line_timestamp(line)) return *ts;
  return Malformed{"missing timestamp"};
}

std::variant<Prefix, Malformed> require_prefix(std::string_view line) {
  auto ts = parse_line_timestamp(line);
  if (!ts) return Malformed{"missing timestamp"};
  auto session = find_session(line);
  if (!session) return Malformed{"missing session fields"};
  return Prefix{*ts, std::move(*session)};
}

}  // namespace

std::optional<Timestamp> parse_line_timestamp(std::string_view line) {
  line = skip_spaces(line);
  bool bracketed = false;
  if (line.starts_with('[')) {
    bracketed = true;
    line.remove_prefix(1);
  }
  // YYMMDD HH:MM:SS
  if (line.size() < 15 || line[6] != ' ' || line[9] != ':' || line[12] != ':') return std::nullopt;
  unsigned yy, mo, dd, hh, mi, ss;
  if (!two_digits(line, 0, yy) || !two_digits(line, 2, mo) || !two_digits(line, 4, dd) ||
      !two_digits(line, 7, hh) || !two_digits(line, 10, mi) || !two_digits(line, 13, ss)) {
    return std::nullopt;
  }
  if (line.size() > 15) {
    const char tail = line[15];
    if (bracketed ? tail != ']' : !is_space(tail)) return std::nullopt;
  } else if (bracketed) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{2000 + static_cast<int>(yy)},
                                        std::chrono::month{mo}, std::chrono::day{dd}};
  if (!ymd.ok() || hh > 23 || mi > 59 || ss > 60) return std::nullopt;
  return Timestamp{Day{ymd}} + std::chrono::hours{hh} + std::chrono::minutes{mi} +
         std::chrono::seconds{ss};
}

std::optional<EventKind> classify_line(std::string_view line) {
  if (line.find(kTransferPhrase) != std::string_view::npos) return EventKind::transfer;
  if (line.find(kReadVPhrase) != std::string_view::npos) return EventKind::readv;
  if (line.find(kReadPhrase) != std::string_view::npos) return EventKind::read;
  if (line.find(kClosePhrase) != std::string_view::npos) return EventKind::close;
  if (find_open_anchor(line) != std::string_view::npos) return EventKind::open;
  return std::nullopt;
}

LineResult<ReadEvent> parse_read(std::string_view line, unsigned* extra_pairs) {
  auto prefix = require_prefix(line);
  if (auto* m = std::get_if<Malformed>(&prefix)) return std::move(*m);
  const auto anchor = line.find(kReadPhrase);
  if (anchor == std::string_view::npos) return Malformed{"missing read keyphrase"};
  std::string_view rest = line.substr(anchor + kReadPhrase.size());

  std::optional<ReadChunk> chunk;
  unsigned extras = 0;
  for_each_token(rest, [&](std::string_view tok) {
    if (auto c = parse_pair(tok)) {
      if (chunk) {
        ++extras;
      } else {
        chunk = c;
      }
    }
    return true;
  });
  if (!chunk) return Malformed{"missing size@offset"};
  auto path = find_path(rest);
  if (!path) return Malformed{"missing path"};
  if (extra_pairs) *extra_pairs = extras;
  auto& p = std::get<Prefix>(prefix);
  return ReadEvent{p.ts, std::move(p.session), std::move(*path), *chunk};
}

LineResult<ReadVEvent> parse_readv(std::string_view line) {
  auto prefix = require_prefix(line);
  if (auto* m = std::get_if<Malformed>(&prefix)) return std::move(*m);
  const auto anchor = line.find(kReadVPhrase);
  if (anchor == std::string_view::npos) return Malformed{"missing readV keyphrase"};
  std::vector<ReadChunk> chunks;
  for_each_token(line.substr(anchor + kReadVPhrase.size()), [&](std::string_view tok) {
    if (auto c = parse_pair(tok)) chunks.push_back(*c);
    return true;
  });
  if (chunks.empty()) return Malformed{"missing size@offset chunks"};
  auto& p = std::get<Prefix>(prefix);
  return ReadVEvent{p.ts, std::move(p.session), std::nullopt, std::move(chunks)};
}

LineResult<OpenEvent> parse_open(std::string_view line) {
  auto prefix = require_prefix(line);
  if (auto* m = std::get_if<Malformed>(&prefix)) return std::move(*m);
  const auto anchor = find_open_anchor(line);
  if (anchor == std::string_view::npos) return Malformed{"missing open keyphrase"};
  auto path = find_path(line.substr(anchor));
  if (!path) return Malformed{"missing path"};
  auto& p = std::get<Prefix>(prefix);
  return OpenEvent{p.ts, std::move(p.session), std::move(*path)};
}

LineResult<CloseEvent> parse_close(std::string_view line) {
  auto prefix = require_prefix(line);
  if (auto* m = std::get_if<Malformed>(&prefix)) return std::move(*m);
  const auto anchor = line.find(kClosePhrase);
  if (anchor == std::string_view::npos) return Malformed{"missing close keyphrase"};
  auto path = find_path(line.substr(anchor));
  if (!path) path = find_path(line);
  if (!path) return Malformed{"missing path"};
  auto& p = std::get<Prefix>(prefix);
  return CloseEvent{p.ts, std::move(p.session), std::move(*path)};
}

LineResult<TransferEvent> parse_transfer(std::string_view line) {
  auto ts = require_timestamp(line);
  if (auto* m = std::get_if<Malformed>(&ts)) return std::move(*m);
  const auto anchor = line.find(kTransferPhrase);
  if (anchor == std::string_view::npos) return Malformed{"missing transfer keyphrase"};
  std::string_view rest = line.substr(anchor + kTransferPhrase.size());
  std::uint64_t size = 0;
  if (!parse_u64(next_token(rest), size)) return Malformed{"missing transfer size"};
  if (size == 0) return Malformed{"zero-byte transfer"};
  auto path = find_path(rest);
  if (!path) path = find_path(line.substr(0, anchor));
  if (!path) return Malformed{"missing path"};
  return TransferEvent{std::get<Timestamp>(ts), std::move(*path), size};
}

bool ReadVResolver::resolve(ReadVEvent& readv) const {
  auto it = latest_.find(readv.session);
  if (it == latest_.end()) return false;
  readv.path = it->second;
  return true;
}

ResolvedStream resolve_readv(std::vector<TraceEvent> stream) {
  ResolvedStream out;
  ReadVResolver resolver;
  for (auto& e : stream) {
    if (auto* open = std::get_if<OpenEvent>(&e)) {
      resolver.observe_open(*open);
    } else if (auto* rv = std::get_if<ReadVEvent>(&e)) {
      if (!rv->path && !resolver.resolve(*rv)) ++out.unresolved;
    }
  }
  out.events = std::move(stream);
  return out;
}

std::uint64_t ParseReport::matched_total() const {
  std::uint64_t n = 0;
  for (auto c : lines_matched) n += c;
  return n;
}

void ParseReport::merge(const ParseReport& o) {
  lines_total += o.lines_total;
  for (std::size_t k = 0; k < kEventKindCount; ++k) {
    lines_matched[k] += o.lines_matched[k];
    malformed_by_kind[k] += o.malformed_by_kind[k];
    out_of_range_by_kind[k] += o.out_of_range_by_kind[k];
  }
  malformed += o.malformed;
  readv_unresolved += o.readv_unresolved;
  field_warnings += o.field_warnings;
  byte_volume_scanned += o.byte_volume_scanned;
  files_parsed += o.files_parsed;
  failed_files.insert(failed_files.end(), o.failed_files.begin(), o.failed_files.end());
}

struct LineReader::Impl {
  std::ifstream plain;
  gzFile gz = nullptr;
  std::vector<char> buf = std::vector<char>(1 << 16);

  ~Impl() {
    if (gz) gzclose(gz);
  }
};

LineReader::LineReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
  if (path.extension() == ".gz") {
    impl_->gz = gzopen(path.c_str(), "rb");
    if (!impl_->gz) throw IoError("cannot open " + path.string());
    gzbuffer(impl_->gz, 1 << 17);
  } else {
    impl_->plain.open(path, std::ios::binary);
    if (!impl_->plain) throw IoError("cannot open " + path.string());
  }
}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
  line.clear();
  if (!impl_->gz) {
    if (!std::getline(impl_->plain, line)) {
      if (impl_->plain.bad()) throw IoError("read error");
      return false;
    }
    bytes_ += line.size() + (impl_->plain.eof() ? 0 : 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  bool any = false;
  for (;;) {
    char* got = gzgets(impl_->gz, impl_->buf.data(), static_cast<int>(impl_->buf.size()));
    if (!got) {
      int err = 0;
      gzerror(impl_->gz, &err);
      if (err != Z_OK && err != Z_STREAM_END) throw IoError("gzip read error");
      break;
    }
    any = true;
    std::string_view chunk{got};
    bytes_ += chunk.size();
    if (!chunk.empty() && chunk.back() == '\n') {
      chunk.remove_suffix(1);
      line.append(chunk);
      break;
    }
    line.append(chunk);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return any;
}

void stream_log_file(const std::filesystem::path& path, const TimeRange& range,
                     ParseReport& report, const EventSink& sink) {
  LineReader reader{path};
  ReadVResolver resolver;
  std::string line;

  auto emit = [&](EventKind kind, auto&& result) {
    const auto k = static_cast<std::size_t>(kind);
    if (auto* m = std::get_if<Malformed>(&result)) {
      ++report.malformed;
      ++report.malformed_by_kind[k];
      return;
    }
    auto& ev = std::get<0>(result);
    if constexpr (std::is_same_v<std::decay_t<decltype(ev)>, OpenEvent>) {
      resolver.observe_open(ev);
    }
    if constexpr (std::is_same_v<std::decay_t<decltype(ev)>, ReadVEvent>) {
      if (!resolver.resolve(ev) && range.contains(ev.ts)) ++report.readv_unresolved;
    }
    if (!range.contains(ev.ts)) {
      ++report.out_of_range_by_kind[k];
      return;
    }
    sink(TraceEvent{std::move(ev)});
  };

  while (reader.next(line)) {
    ++report.lines_total;
    const auto kind = classify_line(line);
    if (!kind) continue;
    ++report.lines_matched[static_cast<std::size_t>(*kind)];
    switch (*kind) {
      case EventKind::read: {
        unsigned extras = 0;
        auto r = parse_read(line, &extras);
        report.field_warnings += extras;
        emit(*kind, std::move(r));
        break;
      }
      case EventKind::readv: emit(*kind, parse_readv(line)); break;
      case EventKind::open: emit(*kind, parse_open(line)); break;
      case EventKind::close: emit(*kind, parse_close(line)); break;
      case EventKind::transfer: emit(*kind, parse_transfer(line)); break;
    }
  }
  report.byte_volume_scanned += reader.bytes_read();
  ++report.files_parsed;
}

ParsedLogs parse_logs(std::span<const std::filesystem::path> files, const TimeRange& range,
                      const ParseOptions& options) {
  struct FileResult {
    std::vector<TraceEvent> events;
    ParseReport report;
    std::exception_ptr error;
  };
  std::vector<FileResult> results(files.size());

  auto work = [&](std::size_t i) {
    try {
      stream_log_file(files[i], range, results[i].report,
                      [&](TraceEvent&& e) { results[i].events.push_back(std::move(e)); });
    } catch (...) {
      results[i].error = std::current_exception();
    }
  };

  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(files.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < files.size(); i = next++) work(i);
      });
    }
  }

  ParsedLogs out;
  std::size_t total = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto& r = results[i];
    if (r.error) {
      try {
        std::rethrow_exception(r.error);
      } catch (const IoError& e) {
        if (!options.tolerant) throw;
        out.report.failed_files.push_back(files[i].string());
        continue;
      }
    }
    out.report.merge(r.report);
    total += r.events.size();
  }

  // Stable sort of the file-ordered concatenation: ties keep file order, then
  // line order.
  out.events.reserve(total);
  for (auto& r : results) {
    if (r.error) continue;
    std::move(r.events.begin(), r.events.end(), std::back_inserter(out.events));
    r.events.clear();
    r.events.shrink_to_fit();
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) {
                     return timestamp_of(a) < timestamp_of(b);
                   });
  return out;
}

std::optional<Day> log_file_day(const std::filesystem::path& file) {
  static const std::regex pattern{R"(^xrootd-(\d{8})\.log(\.gz)?$)"};
  const std::string name = file.filename().string();
  std::smatch m;
  if (!std::regex_match(name, m, pattern)) return std::nullopt;
  return parse_day(m[1].str());
}

std::vector<std::filesystem::path> list_log_files(const std::filesystem::path& dir,
                                                  const std::optional<DayRange>& days) {
  std::error_code ec;
  std::filesystem::directory_iterator it{dir, ec};
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::vector<std::pair<Day, std::filesystem::path>> found;
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    auto day = log_file_day(entry.path());
    if (!day) continue;
    if (days && (*day < days->first || *day > days->last)) continue;
    found.emplace_back(*day, entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  out.reserve(found.size());
  for (auto& [d, p] : found) out.push_back(std::move(p));
  return out;
}

}  // namespace xct
