#include "procstory/prompt.hpp"

#include <algorithm>
#include <sstream>

#include "procstory/error.hpp"
#include "procstory/text.hpp"

namespace procstory {

std::vector<std::string> canonical_participant_order(const AnnotatedStory& story) {
  struct Entry {
    std::string surface;
    int sentence = 1 << 20;
    std::size_t offset = ~std::size_t{0};
  };
  std::vector<Entry> entries;
  for (const Participant& p : story.participants) {
    Entry entry{p.surface, 1 << 20, ~std::size_t{0}};
    for (const Mention& m : p.mentions) {
      if (m.sentence < entry.sentence ||
          (m.sentence == entry.sentence && m.begin < entry.offset)) {
        entry.sentence = m.sentence;
        entry.offset = m.begin;
      }
    }
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.sentence != b.sentence) return a.sentence < b.sentence;
    if (a.offset != b.offset) return a.offset < b.offset;
    return a.surface < b.surface;
  });
  std::vector<std::string> order;
  for (Entry& e : entries) order.push_back(std::move(e.surface));
  return order;
}

namespace {

int participant_index(const std::vector<std::string>& order, const std::string& surface) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == surface) return static_cast<int>(i);
  }
  return -1;
}

/// Body lines per step for one story block.
std::vector<std::vector<std::string>> story_bodies(
    const AnnotatedStory& story, const std::vector<std::string>& order,
    const PromptRequest& request, bool is_query, const std::string& demo_participant) {
  const int n = story.step_count();
  std::vector<std::vector<std::string>> bodies(static_cast<std::size_t>(n));

  auto is_active = [](const StateAnnotation& a) {
    return a.precondition != kIrrelevantLabel || a.effect != kIrrelevantLabel;
  };

  if (request.mode == PromptMode::active_detection) {
    if (!is_query) {
      for (int step = 0; step < n; ++step) {
        std::vector<int> active;
        for (const StateAnnotation& a : story.annotations) {
          if (a.step != step || a.attribute != request.attribute || !is_active(a)) continue;
          int index = participant_index(order, a.participant);
          if (index >= 0) active.push_back(index);
        }
        std::sort(active.begin(), active.end());
        active.erase(std::unique(active.begin(), active.end()), active.end());
        std::string line = "    active = [";
        for (std::size_t i = 0; i < active.size(); ++i) {
          if (i) line += ", ";
          line += "p_" + std::to_string(active[i]);
        }
        line += "]";
        bodies[static_cast<std::size_t>(step)].push_back(std::move(line));
      }
    }
    return bodies;
  }

  // State mode: spell out precondition/effect lines. Demo blocks show the
  // demo participant's gold for the attribute; the query block carries
  // whatever is already annotated.
  const std::vector<StateAnnotation>& source =
      is_query ? request.annotations_so_far : story.annotations;
  for (const StateAnnotation& a : source) {
    if (a.step < 0 || a.step >= n) continue;
    if (!is_query) {
      if (a.participant != demo_participant || a.attribute != request.attribute ||
          !is_active(a)) {
        continue;
      }
    }
    int index = participant_index(order, a.participant);
    if (index < 0) continue;
    std::string prefix = "    p_" + std::to_string(index) + "." + a.attribute;
    bodies[static_cast<std::size_t>(a.step)].push_back(prefix + ".precondition = \"" +
                                                       a.precondition + "\"");
    bodies[static_cast<std::size_t>(a.step)].push_back(prefix + ".effect = \"" + a.effect +
                                                       "\"");
  }
  return bodies;
}

void render_story_block(std::ostringstream& out, const AnnotatedStory& story,
                        const std::vector<std::string>& order,
                        const std::vector<std::vector<std::string>>& bodies,
                        bool open_final) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << "p_" << i << " = Node(\"" << order[i] << "\")\n";
  }
  const int n = story.step_count();
  for (int step = 0; step < n; ++step) {
    out << "\n";
    out << "def step_" << (step + 1) << "():  # "
        << story.sentences[static_cast<std::size_t>(step)].text << "\n";
    for (const std::string& line : bodies[static_cast<std::size_t>(step)]) {
      out << line << "\n";
    }
    if (open_final && step == n - 1) {
      out << "    # complete below\n";
    }
  }
}

}  // namespace

std::string build_code_prompt(const PromptRequest& request) {
  if (!request.query) throw ValidationError("prompt request has no query story");
  std::ostringstream out;
  out << "class Node:\n    ...\n";

  for (const PromptDemo& demo : request.demonstrations) {
    out << "\n\n";
    std::vector<std::string> order = canonical_participant_order(demo.story);
    render_story_block(out, demo.story, order,
                       story_bodies(demo.story, order, request, false, demo.participant),
                       false);
  }

  out << "\n\n";
  std::vector<std::string> order = canonical_participant_order(*request.query);
  render_story_block(out, *request.query, order,
                     story_bodies(*request.query, order, request, true, ""), true);
  return out.str();
}

namespace {

std::optional<int> step_marker(const std::string& trimmed) {
  // "def step_3():..." or "step_3:..." or "step_3 = ..."
  std::string_view v = trimmed;
  if (v.starts_with("def ")) v.remove_prefix(4);
  if (!v.starts_with("step_")) return std::nullopt;
  v.remove_prefix(5);
  std::size_t digits = 0;
  int value = 0;
  while (digits < v.size() && std::isdigit(static_cast<unsigned char>(v[digits]))) {
    value = value * 10 + (v[digits] - '0');
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  return value - 1;  // prompt steps are 1-based
}

std::vector<std::string> parse_name_list(const std::string& text,
                                         const std::vector<std::string>& order) {
  std::vector<std::string> names;
  std::size_t open = text.find('[');
  std::size_t close = text.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) return names;
  std::string inner = text.substr(open + 1, close - open - 1);
  std::size_t start = 0;
  while (start <= inner.size()) {
    std::size_t comma = inner.find(',', start);
    std::string item = trim(inner.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    start = comma == std::string::npos ? inner.size() + 1 : comma + 1;
    if (item.empty()) continue;
    if (item.front() == '"' || item.front() == '\'') item.erase(0, 1);
    if (!item.empty() && (item.back() == '"' || item.back() == '\'')) item.pop_back();
    if (item.starts_with("p_")) {
      try {
        int index = std::stoi(item.substr(2));
        if (index >= 0 && index < static_cast<int>(order.size())) {
          names.push_back(order[static_cast<std::size_t>(index)]);
        }
        continue;
      } catch (...) {
        // fall through to raw-name handling
      }
    }
    names.push_back(to_lower(item));
  }
  return names;
}

}  // namespace

std::optional<std::vector<std::set<std::string>>> parse_active_completion(
    const std::string& completion, const std::vector<std::string>& participant_order,
    int steps) {
  std::vector<std::set<std::string>> active(static_cast<std::size_t>(steps));
  std::set<std::string> known(participant_order.begin(), participant_order.end());
  bool parsed_anything = false;

  int current = -1;
  std::istringstream in(completion);
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (auto step = step_marker(trimmed)) {
      current = *step;
      // Shorthand "step_2: [pizza]" carries the list inline.
      if (trimmed.find('[') != std::string::npos && current >= 0 && current < steps) {
        for (const std::string& name : parse_name_list(trimmed, participant_order)) {
          if (known.count(name)) active[static_cast<std::size_t>(current)].insert(name);
        }
        parsed_anything = true;
      } else if (current >= 0 && current < steps) {
        parsed_anything = true;
      }
      continue;
    }
    if (trimmed.starts_with("active")) {
      if (current >= 0 && current < steps) {
        for (const std::string& name : parse_name_list(trimmed, participant_order)) {
          if (known.count(name)) active[static_cast<std::size_t>(current)].insert(name);
        }
        parsed_anything = true;
      }
    }
  }
  if (!parsed_anything) return std::nullopt;
  return active;
}

std::optional<std::map<int, StateLine>> parse_state_completion(
    const std::string& completion, const std::vector<std::string>& participant_order,
    const std::string& participant, const std::string& attribute, int steps) {
  std::map<int, StateLine> lines;
  bool parsed_anything = false;
  int current = -1;

  std::istringstream in(completion);
  std::string line;
  while (std::getline(in, line)) {
    std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (auto step = step_marker(trimmed)) {
      current = *step;
      parsed_anything = true;
      continue;
    }
    // "p_1.temperature.precondition = "high"" or "pizza.temperature.effect = high"
    std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) continue;
    std::string lhs = trim(trimmed.substr(0, eq));
    std::string rhs = trim(trimmed.substr(eq + 1));
    if (!rhs.empty() && (rhs.front() == '"' || rhs.front() == '\'')) rhs.erase(0, 1);
    if (!rhs.empty() && (rhs.back() == '"' || rhs.back() == '\'')) rhs.pop_back();

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= lhs.size()) {
      std::size_t dot = lhs.find('.', start);
      parts.push_back(lhs.substr(
          start, dot == std::string::npos ? std::string::npos : dot - start));
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (parts.size() != 3) continue;

    std::string who = to_lower(trim(parts[0]));
    if (who.starts_with("p_")) {
      try {
        int index = std::stoi(who.substr(2));
        if (index < 0 || index >= static_cast<int>(participant_order.size())) continue;
        who = participant_order[static_cast<std::size_t>(index)];
      } catch (...) {
        continue;
      }
    }
    if (who != participant) continue;
    if (trim(parts[1]) != attribute) continue;
    if (current < 0 || current >= steps) continue;

    std::string direction = trim(parts[2]);
    StateLine& state = lines[current];
    state.step = current;
    if (direction == "precondition") {
      state.precondition = rhs;
      parsed_anything = true;
    } else if (direction == "effect") {
      state.effect = rhs;
      parsed_anything = true;
    }
  }
  if (!parsed_anything) return std::nullopt;
  return lines;
}

}  // namespace procstory
