#include "puppetwire/behavior_tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "puppetwire/detail/json_fields.hpp"

namespace puppetwire {
namespace {

using nlohmann::json;
using detail::FieldReader;

constexpr std::array<std::string_view, 9> kSounds{"laugh", "giggle", "cheer", "cry",   "sigh",
                                                   "scream", "gasp",  "growl", "groan"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::optional<std::int64_t> read_duration(FieldReader& r) {
  const auto* v = r.find("duration_ms");
  if (v == nullptr) return std::nullopt;
  return r.as_integer("duration_ms", *v);
}

template <typename E>
E read_enum(FieldReader& r, std::string_view field, std::optional<E> (*parse)(std::string_view)) {
  const auto text = r.string(field);
  const auto value = parse(text);
  if (!value) r.fail(Code::MalformedNode, "bad value '" + text + "' for '" + std::string(field) + "'");
  return *value;
}

Vec2 read_point(FieldReader& r, std::string_view field) {
  const auto& v = r.required(field);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    r.fail(Code::MalformedNode, "field '" + std::string(field) + "' must be [x, y]");
  }
  return Vec2{v[0].get<double>(), v[1].get<double>()};
}

NodeParams parse_params(std::string_view kind, const json& params, const std::string& path) {
  FieldReader r(params, path + ".params", Code::MalformedNode, Code::UnknownParam);
  NodeParams out;
  if (kind == "root+") {
    out = RootParams{};
  } else if (kind == "sequence+") {
    out = SequenceParams{read_enum(r, "component", &parse_component)};
  } else if (kind == "danmaku") {
    DanmakuAction a;
    a.text = r.string("text");
    a.font_size = r.number("font_size");
    const auto color = r.string("color");
    const auto rgb = parse_rgb(color);
    if (!rgb) r.fail(Code::MalformedNode, "color must be #RRGGBB, got '" + color + "'");
    a.color = *rgb;
    a.direction = read_enum(r, "direction", &parse_direction);
    a.shift = r.number("shift");
    a.duration_ms = read_duration(r);
    out = Action{a};
  } else if (kind == "swap") {
    SwapAction a;
    a.emotion = read_enum(r, "template", &parse_emotion_template);
    if (a.emotion == EmotionTemplate::Neutral) r.fail(Code::MalformedNode, "swap template must be a basic emotion");
    a.duration_ms = read_duration(r);
    out = Action{a};
  } else if (kind == "particle") {
    ParticleAction a;
    a.texture_id = r.string("texture_id");
    a.emitter = read_point(r, "emitter");
    a.pattern = read_enum(r, "pattern", &parse_particle_pattern);
    a.speed = r.number("speed");
    a.duration_ms = read_duration(r);
    out = Action{a};
  } else if (kind == "vibration") {
    VibrationAction a;
    a.frequency = read_enum(r, "frequency", &parse_level);
    a.amplitude = read_enum(r, "amplitude", &parse_level);
    a.axis = read_enum(r, "axis", &parse_axis);
    a.duration_ms = read_duration(r);
    out = Action{a};
  } else if (kind == "sound") {
    SoundAction a;
    a.sound_id = r.string("sound_id");
    a.duration_ms = read_duration(r);
    out = Action{a};
  } else if (kind == "background_image") {
    out = Action{BackgroundImageAction{r.string("image_id")}};
  } else {
    throw Error(Code::UnknownKind, path + ": unknown kind '" + std::string(kind) + "'",
                {Diagnostic{Code::UnknownKind, {}, path, std::string(kind)}});
  }
  r.finish();
  return out;
}

json action_params(const Action& action) {
  auto put_duration = [](json& j, const std::optional<std::int64_t>& d) {
    if (d) j["duration_ms"] = *d;
  };
  return std::visit(Overloaded{
                        [&](const DanmakuAction& a) {
                          json j{{"text", a.text},
                                 {"font_size", a.font_size},
                                 {"color", to_string(a.color)},
                                 {"direction", to_string(a.direction)},
                                 {"shift", a.shift}};
                          put_duration(j, a.duration_ms);
                          return j;
                        },
                        [&](const SwapAction& a) {
                          json j{{"template", to_string(a.emotion)}};
                          put_duration(j, a.duration_ms);
                          return j;
                        },
                        [&](const ParticleAction& a) {
                          json j{{"texture_id", a.texture_id},
                                 {"emitter", json::array({a.emitter.x, a.emitter.y})},
                                 {"pattern", to_string(a.pattern)},
                                 {"speed", a.speed}};
                          put_duration(j, a.duration_ms);
                          return j;
                        },
                        [&](const VibrationAction& a) {
                          json j{{"frequency", to_string(a.frequency)},
                                 {"amplitude", to_string(a.amplitude)},
                                 {"axis", to_string(a.axis)}};
                          put_duration(j, a.duration_ms);
                          return j;
                        },
                        [&](const SoundAction& a) {
                          json j{{"sound_id", a.sound_id}};
                          put_duration(j, a.duration_ms);
                          return j;
                        },
                        [](const BackgroundImageAction& a) { return json{{"image_id", a.image_id}}; },
                    },
                    action);
}

std::optional<std::int64_t> declared_duration(const Action& action) {
  return std::visit(Overloaded{
                        [](const BackgroundImageAction&) -> std::optional<std::int64_t> { return std::nullopt; },
                        [](const auto& a) -> std::optional<std::int64_t> { return a.duration_ms; },
                    },
                    action);
}

void check_action_params(const TreeNode& node, const Action& action, Diagnostics& out) {
  auto bad = [&](Code code, const std::string& what) { out.push_back({code, {}, node.id, what}); };
  if (const auto d = declared_duration(action); d && *d <= 0) bad(Code::InvalidParam, "duration_ms must be > 0");
  std::visit(Overloaded{
                 [&](const DanmakuAction& a) {
                   if (a.text.empty()) bad(Code::InvalidParam, "danmaku text is empty");
                   if (!(a.font_size > 0.0)) bad(Code::InvalidParam, "font_size must be > 0");
                   if (!(a.shift >= 0.0 && a.shift <= 1.0)) bad(Code::InvalidParam, "shift must be within [0, 1]");
                 },
                 [&](const ParticleAction& a) {
                   if (a.texture_id.empty()) bad(Code::InvalidParam, "texture_id is empty");
                   if (!(a.speed > 0.0)) bad(Code::InvalidParam, "speed must be > 0");
                   const bool inside = a.emitter.x >= 0.0 && a.emitter.x <= 1.0 && a.emitter.y >= 0.0 &&
                                       a.emitter.y <= 1.0;
                   if (!inside) bad(Code::InvalidParam, "emitter must lie within [0, 1]^2");
                 },
                 [&](const SoundAction& a) {
                   const auto reg = sound_registry();
                   if (std::find(reg.begin(), reg.end(), a.sound_id) == reg.end()) {
                     bad(Code::UnknownSound, "sound '" + a.sound_id + "' is not in the registry");
                   }
                 },
                 [&](const BackgroundImageAction& a) {
                   if (a.image_id.empty()) bad(Code::InvalidParam, "image_id is empty");
                 },
                 [](const auto&) {},
             },
             action);
}

}  // namespace

const TreeNode* BehaviorTree::find(std::string_view id) const {
  const auto it = std::find_if(nodes.begin(), nodes.end(), [&](const TreeNode& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::string_view action_name(const Action& action) {
  static constexpr std::array<std::string_view, 6> kNames{"danmaku", "swap",  "particle",
                                                          "vibration", "sound", "background_image"};
  return kNames[action.index()];
}

std::string_view kind_name(const NodeParams& params) {
  if (std::holds_alternative<RootParams>(params)) return "root+";
  if (std::holds_alternative<SequenceParams>(params)) return "sequence+";
  return action_name(std::get<Action>(params));
}

std::span<const std::string_view> sound_registry() { return kSounds; }

bool component_accepts(Component component, const Action& action) {
  return std::visit(Overloaded{
                        [&](const SwapAction&) { return component == Component::Face; },
                        [&](const SoundAction&) { return component == Component::Face; },
                        [&](const ParticleAction&) { return component == Component::Background; },
                        [&](const BackgroundImageAction&) { return component == Component::Background; },
                        [&](const DanmakuAction&) { return component == Component::Text; },
                        [](const VibrationAction&) { return true; },
                    },
                    action);
}

double danmaku_text_width(const DanmakuAction& action) {
  return 0.6 * action.font_size * static_cast<double>(utf8_length(action.text)) / kSceneWidthPoints;
}

std::int64_t effective_duration_ms(const Action& action) {
  return std::visit(Overloaded{
                        [](const DanmakuAction& a) -> std::int64_t {
                          if (a.duration_ms) return *a.duration_ms;
                          const double span = 1.0 + 2.0 * danmaku_text_width(a);
                          return static_cast<std::int64_t>(std::ceil(span / kDanmakuTraversalSpeed * 1000.0));
                        },
                        [](const BackgroundImageAction&) -> std::int64_t { return 0; },
                        [](const auto& a) -> std::int64_t { return a.duration_ms.value_or(kDefaultActionDurationMs); },
                    },
                    action);
}

BehaviorTree parse_tree(const json& doc) {
  FieldReader top(doc, "tree", Code::MalformedNode, Code::MalformedNode);
  BehaviorTree tree;
  tree.root = top.string("root");
  const auto& nodes = top.required("nodes");
  if (!nodes.is_array()) top.fail(Code::MalformedNode, "'nodes' must be an array");
  top.finish();

  std::set<std::string> ids;
  tree.nodes.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    FieldReader r(nodes[i], "tree.nodes[" + std::to_string(i) + "]", Code::MalformedNode, Code::MalformedNode);
    TreeNode node;
    node.id = r.string("id");
    const auto kind = r.string("kind");
    static const json kEmpty = json::object();
    const auto* params = r.find("params");
    node.params = parse_params(kind, params ? *params : kEmpty, "tree.nodes[" + node.id + "]");
    if (const auto* children = r.find("children")) {
      if (!children->is_array()) r.fail(Code::MalformedNode, "'children' must be an array");
      for (const auto& c : *children) {
        if (!c.is_string()) r.fail(Code::MalformedNode, "child ids must be strings");
        node.children.push_back(c.get<std::string>());
      }
    }
    r.finish();
    ids.insert(node.id);
    tree.nodes.push_back(std::move(node));
  }

  auto dangling = [](const std::string& where, const std::string& id) {
    throw Error(Code::DanglingEdge, where + " references missing node '" + id + "'",
                {Diagnostic{Code::DanglingEdge, {}, where, id}});
  };
  if (!ids.contains(tree.root)) dangling("tree.root", tree.root);
  for (const auto& node : tree.nodes) {
    for (const auto& child : node.children) {
      if (!ids.contains(child)) dangling(node.id, child);
    }
  }
  return tree;
}

json serialize_tree(const BehaviorTree& tree) {
  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json params = json::object();
    if (const auto* seq = std::get_if<SequenceParams>(&node.params)) {
      params["component"] = to_string(seq->component);
    } else if (const auto* action = std::get_if<Action>(&node.params)) {
      params = action_params(*action);
    }
    nodes.push_back(json{{"id", node.id}, {"kind", kind_name(node.params)}, {"params", params},
                         {"children", node.children}});
  }
  return json{{"nodes", nodes}, {"root", tree.root}};
}

Diagnostics validate_tree(const BehaviorTree& tree) {
  Diagnostics out;
  auto diag = [&](Code code, const std::string& id, const std::string& what) { out.push_back({code, {}, id, what}); };

  std::map<std::string, const TreeNode*> by_id;
  for (const auto& node : tree.nodes) {
    if (!by_id.emplace(node.id, &node).second) diag(Code::DuplicateNodeId, node.id, "node id is not unique");
  }

  std::size_t roots = 0;
  for (const auto& node : tree.nodes) {
    if (node.kind() != NodeKind::RootPlus) continue;
    if (++roots > 1) diag(Code::MultipleRoots, node.id, "tree has more than one root+ node");
  }
  const auto root_it = by_id.find(tree.root);
  const bool root_ok = root_it != by_id.end() && root_it->second->kind() == NodeKind::RootPlus;
  if (!root_ok) diag(Code::MissingRoot, tree.root, "root does not name a root+ node");

  std::map<std::string, int> parents;
  for (const auto& node : tree.nodes) {
    for (const auto& child_id : node.children) {
      const auto it = by_id.find(child_id);
      if (it == by_id.end()) {
        diag(Code::DanglingEdge, node.id, "child '" + child_id + "' does not exist");
        continue;
      }
      const TreeNode& child = *it->second;
      if (++parents[child_id] == 2) diag(Code::MultipleParents, child_id, "node has more than one parent");
      const bool legal = (node.kind() == NodeKind::RootPlus && child.kind() == NodeKind::SequencePlus) ||
                         (node.kind() == NodeKind::SequencePlus && child.kind() == NodeKind::Action);
      if (!legal) {
        diag(Code::IllegalEdge, child_id,
             "edge " + std::string(kind_name(node.params)) + " -> " + std::string(kind_name(child.params)) +
                 " from '" + node.id + "' is not allowed");
        continue;
      }
      if (const auto* seq = std::get_if<SequenceParams>(&node.params)) {
        const auto& action = std::get<Action>(child.params);
        if (!component_accepts(seq->component, action)) {
          diag(Code::ComponentMismatch, child_id,
               std::string(action_name(action)) + " cannot run on the " + std::string(to_string(seq->component)) +
                   " component");
        }
      }
    }
    if (const auto* action = std::get_if<Action>(&node.params)) check_action_params(node, *action, out);
  }

  // Reachability and cycles, iterative DFS from the declared root.
  if (root_ok) {
    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> mark;
    std::vector<std::pair<std::string, std::size_t>> stack{{tree.root, 0}};
    mark[tree.root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const TreeNode& node = *by_id.at(id);
      if (next == node.children.size()) {
        mark[id] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const std::string child = node.children[next++];
      if (!by_id.contains(child)) continue;
      const Mark m = mark.contains(child) ? mark[child] : Mark::White;
      if (m == Mark::Grey) {
        diag(Code::Cycle, child, "cycle through '" + child + "'");
      } else if (m == Mark::White) {
        mark[child] = Mark::Grey;
        stack.emplace_back(child, 0);
      }
    }
    for (const auto& node : tree.nodes) {
      if (!mark.contains(node.id)) diag(Code::UnreachableNode, node.id, "node is not reachable from the root");
    }
  }
  return out;
}

ActionTimeline compile_timeline(const BehaviorTree& tree) {
  if (auto diags = validate_tree(tree); !diags.empty()) {
    throw Error(Code::InvalidTree, "tree failed validation (" + std::to_string(diags.size()) + " diagnostics)",
                std::move(diags));
  }
  ActionTimeline timeline;
  const TreeNode& root = *tree.find(tree.root);
  for (const auto& seq_id : root.children) {
    const TreeNode& seq = *tree.find(seq_id);
    const Component component = std::get<SequenceParams>(seq.params).component;
    std::int64_t cursor = 0;
    for (const auto& action_id : seq.children) {
      const TreeNode& node = *tree.find(action_id);
      const auto& action = std::get<Action>(node.params);
      const std::int64_t end = cursor + effective_duration_ms(action);
      timeline.entries.push_back(TimelineEntry{component, node.id, action, cursor, end});
      cursor = end;
    }
    timeline.total_ms = std::max(timeline.total_ms, cursor);
  }
  return timeline;
}

}  // namespace puppetwire
