#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "polyarena/bench.hpp"
#include "polyarena/errors.hpp"
#include "polyarena/recorder.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace polyarena;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get_ref<const std::string&>());
    case json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_py(x));
      return std::move(out);
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return std::move(out);
    }
    default: return py::none();
  }
}

json from_py(py::handle h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<std::int64_t>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    json out = json::object();
    for (const auto& [k, v] : h.cast<py::dict>()) out[py::str(k).cast<std::string>()] = from_py(v);
    return out;
  }
  if (py::isinstance<py::array>(h)) return from_py(h.attr("tolist")());
  if (py::isinstance<py::sequence>(h)) {
    json out = json::array();
    for (const auto& x : h.cast<py::sequence>()) out.push_back(from_py(x));
    return out;
  }
  if (py::hasattr(h, "__float__")) return h.cast<double>();
  throw py::type_error("cannot convert " + py::repr(h).cast<std::string>() + " to an action or recipe value");
}

/// Builtin name, file path, or JSON text.
Recipe recipe_from(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && spec[first] == '{') return parse_recipe_text(spec);
  return load_recipe(spec);
}

py::object observation_to_py(const Observation& o) {
  if (const auto* img = std::get_if<Image>(&o)) {
    py::array_t<std::uint8_t> a({img->height, img->width, 3});
    std::copy(img->rgb.begin(), img->rgb.end(), a.mutable_data());
    return std::move(a);
  }
  if (const auto* f = std::get_if<std::vector<double>>(&o)) {
    py::array_t<double> a(static_cast<py::ssize_t>(f->size()));
    std::copy(f->begin(), f->end(), a.mutable_data());
    return std::move(a);
  }
  py::list polys;
  for (const Drawable& d : std::get<DisplayList>(o)) {
    py::list pts;
    for (const Vec2& p : d.points) pts.append(py::make_tuple(p.x, p.y));
    py::dict poly;
    poly["pts"] = pts;
    poly["color"] = py::make_tuple(d.color[0], d.color[1], d.color[2]);
    poly["opacity"] = d.opacity;
    polys.append(poly);
  }
  return std::move(polys);
}

py::dict timestep_to_py(const TimeStep& ts) {
  py::dict obs;
  for (const auto& [name, o] : ts.observations) obs[py::str(name)] = observation_to_py(o);
  py::dict out;
  out["kind"] = std::string(to_string(ts.kind));
  out["reward"] = ts.reward;
  out["observations"] = obs;
  out["step_index"] = ts.meta.step_index;
  out["trial_index"] = ts.meta.trial_index;
  out["phase"] = ts.meta.phase ? py::object(py::str(*ts.meta.phase)) : py::none();
  return out;
}

class PyEnvironment {
 public:
  PyEnvironment(const std::string& recipe, std::optional<std::uint64_t> seed)
      : recipe_(recipe_from(recipe)), env_(build(recipe_, seed)) {}
  PyEnvironment(Recipe recipe, Environment env) : recipe_(std::move(recipe)), env_(std::move(env)) {}

  py::dict reset() { return timestep_to_py(env_.reset()); }
  py::dict step(py::object action, bool observe) {
    const Action a = Action::from_json(from_py(action));
    return timestep_to_py(env_.step(a, observe));
  }
  PyEnvironment clone() const { return {recipe_, env_.clone_for_simulation()}; }
  py::object state() const { return to_py(state_record(env_.state())); }
  py::object action_spec() const { return to_py(env_.action_spec().to_json()); }
  py::dict observation_spec() const {
    py::dict out;
    for (const auto& [name, spec] : env_.observation_spec()) out[py::str(name)] = py::tuple(py::cast(spec.shape));
    return out;
  }
  std::string recipe_name() const { return recipe_.name; }
  int step_index() const { return env_.step_index(); }
  int trial_index() const { return env_.trial_index(); }
  py::object seek_action() const {
    const auto hint = policy_hint(recipe_);
    if (!hint) return py::none();
    return to_py(polyarena::seek_action(env_.action_spec(), env_.state(), *hint).to_json());
  }

 private:
  Recipe recipe_;
  Environment env_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "polyarena engine core";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SchemaError>(m, "SchemaError", m.attr("Error"));
  py::register_exception<ActionOutOfSpec>(m, "ActionOutOfSpec", m.attr("Error"));
  py::register_exception<SteppedAfterLast>(m, "SteppedAfterLast", m.attr("Error"));
  py::register_exception<UnknownBuiltin>(m, "UnknownBuiltin", m.attr("Error"));

  m.def("builtin_names", &builtin_names);
  m.def(
      "recipe_text", [](const std::string& recipe) { return serialize(recipe_from(recipe)); }, py::arg("recipe"),
      "Canonical JSON text of a builtin, file or JSON recipe.");

  py::class_<PyEnvironment>(m, "Environment")
      .def(py::init<const std::string&, std::optional<std::uint64_t>>(), py::arg("recipe"),
           py::arg("seed") = py::none())
      .def("reset", &PyEnvironment::reset)
      .def("step", &PyEnvironment::step, py::arg("action") = py::none(), py::arg("observe") = true)
      .def("clone", &PyEnvironment::clone, "Independent simulator with identical future behavior.")
      .def("state", &PyEnvironment::state)
      .def("seek_action", &PyEnvironment::seek_action,
           "Action steering the hinted agent toward its target, or None without a hint.")
      .def_property_readonly("action_spec", &PyEnvironment::action_spec)
      .def_property_readonly("observation_spec", &PyEnvironment::observation_spec)
      .def_property_readonly("recipe", &PyEnvironment::recipe_name)
      .def_property_readonly("step_index", &PyEnvironment::step_index)
      .def_property_readonly("trial_index", &PyEnvironment::trial_index);

  m.def(
      "benchmark",
      [](const std::string& recipe, int size, int steps, std::uint64_t seed) {
        BenchResult r;
        {
          py::gil_scoped_release release;
          r = run_benchmark(recipe_from(recipe), size, steps, seed);
        }
        py::dict out;
        out["steps"] = r.steps;
        out["seconds"] = r.seconds;
        out["fps"] = r.fps;
        out["trials"] = r.trials;
        return out;
      },
      py::arg("recipe"), py::arg("size") = 512, py::arg("steps") = 1000, py::arg("seed") = 0);

  m.def(
      "generate_dataset",
      [](const std::string& recipe, const std::filesystem::path& out_dir, int episodes, int size,
         const std::string& policy, std::uint64_t seed, int max_steps) {
        DatasetOptions o;
        o.episodes = episodes;
        o.width = o.height = size;
        o.policy = policy;
        o.seed = seed;
        o.max_steps = max_steps;
        json manifest;
        {
          py::gil_scoped_release release;
          manifest = polyarena::generate_dataset(recipe_from(recipe), o, out_dir);
        }
        return to_py(manifest);
      },
      py::arg("recipe"), py::arg("out_dir"), py::arg("episodes") = 1, py::arg("size") = 64,
      py::arg("policy") = "random", py::arg("seed") = 0, py::arg("max_steps") = 1000);

  m.def(
      "verify_replay",
      [](const std::string& recipe, std::uint64_t seed, const std::filesystem::path& log) {
        return verify_replay(recipe_from(recipe), seed, read_log(log)).identical();
      },
      py::arg("recipe"), py::arg("seed"), py::arg("log"));
}
