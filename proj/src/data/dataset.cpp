#include "tacgap/data/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "tacgap/errors.hpp"
#include "tacgap/mask.hpp"

namespace tacgap::data {

using nlohmann::json;

namespace {
json meta_to_json(const SampleMeta& m) {
    return json{{"grid_pos", m.grid_pos}, {"tap_index", m.tap_index}};
}
SampleMeta meta_from_json(const json& j) {
    SampleMeta m;
    m.grid_pos = j.value("grid_pos", 0);
    m.tap_index = j.value("tap_index", 0);
    return m;
}
}  // namespace

DatasetManifest DatasetManifest::load(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw DataError("cannot open manifest: " + json_path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("manifest parse error in " + json_path.string() + ": " + e.what());
    }
    DatasetManifest m;
    m.root = json_path.parent_path();
    try {
        m.classes = j.at("classes").get<std::vector<std::string>>();
        m.elastomer_depth = j.at("elastomer_depth").get<double>();
        m.depth_scale = j.at("depth_scale").get<double>();
        m.resolution = j.at("resolution").get<int>();
        m.image_format = j.value("image_format", std::string("png8+png16"));
        for (const auto& js : j.at("samples")) {
            SampleRef r;
            r.id = js.at("id").get<std::string>();
            r.label = js.at("label").get<int>();
            r.split = js.at("split").get<std::string>();
            r.sim_file = js.at("sim").get<std::string>();
            r.real_file = js.value("real", std::string());
            r.depth_file = js.at("depth").get<std::string>();
            if (js.contains("meta")) r.meta = meta_from_json(js.at("meta"));
            m.samples.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw DataError("manifest field error in " + json_path.string() + ": " + e.what());
    }
    m.validate(false);
    return m;
}

void DatasetManifest::save(const std::filesystem::path& json_path) const {
    json j;
    j["classes"] = classes;
    j["elastomer_depth"] = elastomer_depth;
    j["depth_scale"] = depth_scale;
    j["resolution"] = resolution;
    j["image_format"] = image_format;
    j["samples"] = json::array();
    for (const auto& r : samples) {
        json js{{"id", r.id},       {"label", r.label},      {"split", r.split},
                {"sim", r.sim_file}, {"depth", r.depth_file}, {"meta", meta_to_json(r.meta)}};
        if (!r.real_file.empty()) js["real"] = r.real_file;
        j["samples"].push_back(std::move(js));
    }
    std::ofstream out(json_path);
    if (!out) throw DataError("cannot write manifest: " + json_path.string());
    out << j.dump(2) << "\n";
}

void DatasetManifest::validate(bool check_files) const {
    if (classes.size() < 2) throw DataError("manifest must define at least 2 classes");
    if (!(elastomer_depth > 0.0)) throw DataError("manifest elastomer_depth must be > 0");
    if (!(depth_scale > 0.0)) throw DataError("manifest depth_scale must be > 0");
    std::set<std::string> ids;
    for (const auto& r : samples) {
        if (r.label < 0 || r.label >= static_cast<int>(classes.size()))
            throw DataError("sample '" + r.id + "': label " + std::to_string(r.label) +
                            " outside class count " + std::to_string(classes.size()));
        if (r.split != "train" && r.split != "test")
            throw DataError("sample '" + r.id + "': unknown split '" + r.split + "'");
        if (!ids.insert(r.id).second)
            throw DataError("duplicate sample id '" + r.id + "' (splits must be disjoint)");
        if (check_files) {
            for (const std::string* f : {&r.sim_file, &r.depth_file}) {
                if (!std::filesystem::exists(root / *f))
                    throw DataError("sample '" + r.id + "': missing file " + (root / *f).string());
            }
            if (!r.real_file.empty() && !std::filesystem::exists(root / r.real_file))
                throw DataError("sample '" + r.id + "': missing file " +
                                (root / r.real_file).string());
        }
    }
}

std::vector<SampleRef> DatasetManifest::split(const std::string& which) const {
    std::vector<SampleRef> out;
    for (const auto& r : samples)
        if (r.split == which) out.push_back(r);
    return out;
}

bool DatasetManifest::fully_paired() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const SampleRef& r) { return !r.real_file.empty(); });
}

SamplePair load_sample(const DatasetManifest& manifest, const SampleRef& ref) {
    SamplePair s;
    s.id = ref.id;
    s.label = ref.label;
    s.meta = ref.meta;
    const auto sim_path = manifest.root / ref.sim_file;
    if (!std::filesystem::exists(sim_path))
        throw DataError("sample '" + ref.id + "': missing file " + sim_path.string());
    s.sim = normalize_image(read_rgb8_png(sim_path));
    if (!ref.real_file.empty()) {
        const auto real_path = manifest.root / ref.real_file;
        if (!std::filesystem::exists(real_path))
            throw DataError("sample '" + ref.id + "': missing file " + real_path.string());
        s.real = normalize_image(read_rgb8_png(real_path));
    }
    const auto depth_path = manifest.root / ref.depth_file;
    if (!std::filesystem::exists(depth_path))
        throw DataError("sample '" + ref.id + "': missing file " + depth_path.string());
    s.depth = read_depth_png(depth_path, manifest.depth_scale);
    s.mask = mask::mask_from_depth(s.depth, manifest.elastomer_depth);
    s.validate_alignment();
    return s;
}

std::vector<SamplePair> load_dataset(const DatasetManifest& manifest) {
    manifest.validate(false);
    std::vector<SamplePair> out;
    out.reserve(manifest.samples.size());
    for (const auto& ref : manifest.samples) out.push_back(load_sample(manifest, ref));
    return out;
}

DatasetManifest reference_layout_manifest(const std::filesystem::path& root) {
    DatasetManifest m;
    m.root = root;
    for (int c = 0; c < 21; ++c) m.classes.push_back("object_" + std::to_string(c));
    for (int c = 0; c < 21; ++c)
        for (int g = 0; g < 9; ++g)
            for (int d = 0; d < 11; ++d) {
                SampleRef r;
                r.id = m.classes[c] + "_g" + std::to_string(g) + "_d" + std::to_string(d);
                r.label = c;
                r.split = d < 9 ? "train" : "test";
                const std::string stem = m.classes[c] + "/" + r.id;
                r.sim_file = stem + ".sim.png";
                r.real_file = stem + ".real.png";
                r.depth_file = stem + ".depth.png";
                r.meta = {g, d};
                m.samples.push_back(std::move(r));
            }
    return m;
}

std::vector<IndenterSpec> synth_class_templates(int classes) {
    if (classes < 2 || classes > 8)
        throw ConfigError("synthetic dataset supports 2..8 classes, got " +
                          std::to_string(classes));
    const std::vector<IndenterSpec> all = {
        {IndenterShape::sphere, 2.0e-3, 0.0, 0.0, 0.0, 0.0},
        {IndenterShape::cylinder, 2.2e-3, 0.0, 0.0, 0.0, 0.0},
        {IndenterShape::ridge, 0.0, 0.85, 0.0, 0.0, 0.0},
        {IndenterShape::sphere, 3.4e-3, 0.0, 0.0, 0.0, 0.0},
        {IndenterShape::cylinder, 1.2e-3, 0.0, 0.0, 0.0, 0.0},
        {IndenterShape::ridge, 0.0, 1.7, 0.0, 0.0, 0.0},
        {IndenterShape::sphere, 1.2e-3, 0.0, 0.0, 0.0, 0.0},
        {IndenterShape::cylinder, 3.4e-3, 0.0, 0.0, 0.0, 0.0},
    };
    return {all.begin(), all.begin() + classes};
}

DatasetManifest write_synth_dataset(const std::filesystem::path& root,
                                    const SynthDatasetConfig& cfg) {
    if (cfg.count < 1) throw ConfigError("dataset synth: count must be >= 1");
    if (cfg.resolution < 8) throw ConfigError("dataset synth: resolution must be >= 8");
    if (cfg.test_fraction < 0.0 || cfg.test_fraction >= 1.0)
        throw ConfigError("dataset synth: test fraction must be in [0, 1)");
    const auto templates = synth_class_templates(cfg.classes);

    DatasetManifest m;
    m.root = root;
    m.elastomer_depth = cfg.geometry.elastomer_depth;
    m.depth_scale = cfg.geometry.depth_scale;
    m.resolution = cfg.resolution;
    const char* names[] = {"sphere_s", "cylinder_s", "ridge_soft", "sphere_l",
                           "cylinder_n", "ridge_steep", "sphere_xs",  "cylinder_l"};
    for (int c = 0; c < cfg.classes; ++c) m.classes.emplace_back(names[c]);

    LightConfig lights = default_lights();
    lights.gradient_gain = cfg.resolution / cfg.geometry.fov;

    Rng base(cfg.seed, 0x7ac61a5u);
    std::filesystem::create_directories(root);

    const int per_class = (cfg.count + cfg.classes - 1) / cfg.classes;
    const int test_start = per_class - static_cast<int>(std::floor(per_class * cfg.test_fraction + 0.5));
    for (int i = 0; i < cfg.count; ++i) {
        const int label = i % cfg.classes;
        const int j = i / cfg.classes;  // index within the class
        Rng rng = base.fork(static_cast<std::uint64_t>(i) + 1);

        IndenterSpec ind = templates[label];
        const int grid_pos = j % 9;
        const int tap_index = (j / 9) % 11;
        const double cell = cfg.geometry.fov / 8.0;
        ind.center_x = (grid_pos % 3 - 1) * cell + rng.uniform(-0.25, 0.25) * cell;
        ind.center_y = (grid_pos / 3 - 1) * cell + rng.uniform(-0.25, 0.25) * cell;
        if (ind.shape != IndenterShape::sphere) ind.angle_deg = rng.uniform(0.0, 180.0);
        const double tap_depth = 8.0e-4 + tap_index * 9.0e-5 + rng.uniform(0.0, 5.0e-5);

        DepthMap depth =
            synth_depth_map(ind, tap_depth, cfg.resolution, cfg.resolution, cfg.geometry);
        TactileImage sim = render_simulated(depth, lights);
        TactileImage real = render_pseudo_real(depth, cfg.texture, lights, cfg.geometry, rng);

        SampleRef r;
        r.label = label;
        r.id = m.classes[label] + "_" + std::to_string(j);
        r.split = j >= test_start ? "test" : "train";
        r.meta = {grid_pos, tap_index};
        const std::string dir = m.classes[label];
        std::filesystem::create_directories(root / dir);
        const std::string stem = dir + "/" + r.id;
        r.sim_file = stem + ".sim.png";
        r.real_file = stem + ".real.png";
        r.depth_file = stem + ".depth.png";
        write_rgb8_png(root / r.sim_file, denormalize_image(sim));
        write_rgb8_png(root / r.real_file, denormalize_image(real));
        write_depth_png(root / r.depth_file, depth);
        if (cfg.write_masks)
            mask::write_mask_png(root / (stem + ".mask.png"),
                                 mask::mask_from_depth(depth, m.elastomer_depth));
        m.samples.push_back(std::move(r));
    }
    m.validate(true);
    m.save(root / "manifest.json");
    return m;
}

}  // namespace tacgap::data
