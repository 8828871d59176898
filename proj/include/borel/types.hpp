#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace borel {

/// Event index. Sequences start at 1.
using Index = std::int64_t;

/// Largest index any backend accepts. Keeps every index exactly representable
/// as a double so family formulas stay well defined.
inline constexpr Index kMaxIndex = Index{1} << 52;

/// Required value of one event indicator inside a window.
enum class Slot : std::uint8_t { Complement = 0, Event = 1 };

enum class Terminal { Occurrence, AllComplement };

/// PrefixComplement: complements first, then the occurrence.
/// SuffixComplement: occurrence first, then complements.
enum class Orientation { PrefixComplement, SuffixComplement };

/// Query shape for conjunction windows over consecutive events.
///
/// With PrefixComplement/Occurrence and prefix_len = m the window is
/// "no event at start..start+m-1, event at start+m". prefix_len = 0 with
/// Occurrence is the bare event at `start`. AllComplement drops the terminal
/// occurrence and is used for remainder bounds.
struct WindowPattern {
  Index start = 1;
  Index prefix_len = 0;
  Terminal terminal = Terminal::Occurrence;
  Orientation orientation = Orientation::PrefixComplement;

  /// Number of indices covered by the window.
  Index span() const {
    return terminal == Terminal::Occurrence ? prefix_len + 1 : prefix_len;
  }
  Index last() const { return start + span() - 1; }

  /// Expands the window into one slot per covered index.
  std::vector<Slot> slots() const;

  /// Throws std::invalid_argument on a malformed window.
  void validate() const;

  static WindowPattern occurrence(Index start, Index m,
                                  Orientation o = Orientation::PrefixComplement) {
    return {start, m, Terminal::Occurrence, o};
  }
  static WindowPattern all_complement(Index start, Index m) {
    return {start, m, Terminal::AllComplement, Orientation::PrefixComplement};
  }
};

std::string to_string(const WindowPattern& w);

/// Malformed model specification. `field` is a JSON-pointer style path.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Index beyond what an explicit model specification or the index type covers.
class IndexOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Non-finite intermediate value. Computation must abort.
class NumericFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace borel
