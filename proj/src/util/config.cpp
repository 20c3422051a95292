#include "tacgap/util/config.hpp"

#include "tacgap/errors.hpp"
#include "tacgap/util/toml.hpp"

namespace tacgap::util {

using nlohmann::json;

namespace {

// Field-level lookup with type conversion errors that name the field.
template <typename T>
T field(const json& j, const std::string& table, const std::string& key, T fallback) {
    if (!j.contains(table) || !j.at(table).contains(key)) return fallback;
    try {
        return j.at(table).at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field [" + table + "]." + key + " has the wrong type");
    }
}

}  // namespace

TrainConfig TrainConfig::from_json(const json& j) {
    TrainConfig c;
    c.manifest = field<std::string>(j, "data", "manifest", c.manifest);
    c.resolution = field<int>(j, "data", "resolution", c.resolution);

    c.model.gen_base_filters = field<int>(j, "model", "gen_base_filters", c.model.gen_base_filters);
    c.model.disc_base_filters =
        field<int>(j, "model", "disc_base_filters", c.model.disc_base_filters);
    c.model.disc_layers = field<int>(j, "model", "disc_layers", c.model.disc_layers);
    c.model.dropout_rate = field<double>(j, "model", "dropout_rate", c.model.dropout_rate);
    c.model.leaky_slope = field<double>(j, "model", "leaky_slope", c.model.leaky_slope);

    c.weights.gan = field<double>(j, "loss", "gan", c.weights.gan);
    c.weights.cycle = field<double>(j, "loss", "cycle", c.weights.cycle);
    c.weights.identity = field<double>(j, "loss", "identity", c.weights.identity);
    c.weights.mask = field<double>(j, "loss", "mask", c.weights.mask);
    c.weights.alpha = field<double>(j, "loss", "alpha", c.weights.alpha);
    c.adv_mode = field<std::string>(j, "loss", "mode", c.adv_mode);

    c.optimizer.lr = field<double>(j, "optimizer", "lr", c.optimizer.lr);
    c.optimizer.beta1 = field<double>(j, "optimizer", "beta1", c.optimizer.beta1);
    c.optimizer.beta2 = field<double>(j, "optimizer", "beta2", c.optimizer.beta2);
    c.optimizer.linear_decay = field<bool>(j, "optimizer", "linear_decay", c.optimizer.linear_decay);

    c.batch_size = field<int>(j, "train", "batch_size", c.batch_size);
    c.epochs = field<int>(j, "train", "epochs", c.epochs);
    c.max_steps = field<int>(j, "train", "max_steps", c.max_steps);
    c.seed = field<std::uint64_t>(j, "train", "seed", c.seed);
    c.checkpoint_every = field<int>(j, "train", "checkpoint_every", c.checkpoint_every);
    c.buffer_size = field<int>(j, "train", "buffer_size", c.buffer_size);
    c.paired_batches = field<bool>(j, "train", "paired_batches", c.paired_batches);

    c.augment_enabled = field<bool>(j, "augment", "enabled", c.augment_enabled);
    c.augment.upscale = field<double>(j, "augment", "upscale", c.augment.upscale);
    c.augment.crop_size = field<int>(j, "augment", "crop", c.augment.crop_size);
    c.augment.max_rotation_deg =
        field<double>(j, "augment", "max_rotation_deg", c.augment.max_rotation_deg);
    c.augment.flip_prob = field<double>(j, "augment", "flip_prob", c.augment.flip_prob);
    return c;
}

TrainConfig TrainConfig::from_file(const std::filesystem::path& path) {
    TrainConfig c = from_json(load_config_file(path));
    c.validate();
    return c;
}

json TrainConfig::to_json() const {
    return json{
        {"data", {{"manifest", manifest}, {"resolution", resolution}}},
        {"model",
         {{"gen_base_filters", model.gen_base_filters},
          {"disc_base_filters", model.disc_base_filters},
          {"disc_layers", model.disc_layers},
          {"dropout_rate", model.dropout_rate},
          {"leaky_slope", model.leaky_slope}}},
        {"loss",
         {{"gan", weights.gan},
          {"cycle", weights.cycle},
          {"identity", weights.identity},
          {"mask", weights.mask},
          {"alpha", weights.alpha},
          {"mode", adv_mode}}},
        {"optimizer",
         {{"lr", optimizer.lr},
          {"beta1", optimizer.beta1},
          {"beta2", optimizer.beta2},
          {"linear_decay", optimizer.linear_decay}}},
        {"train",
         {{"batch_size", batch_size},
          {"epochs", epochs},
          {"max_steps", max_steps},
          {"seed", seed},
          {"checkpoint_every", checkpoint_every},
          {"buffer_size", buffer_size},
          {"paired_batches", paired_batches}}},
        {"augment",
         {{"enabled", augment_enabled},
          {"upscale", augment.upscale},
          {"crop", augment.crop_size},
          {"max_rotation_deg", augment.max_rotation_deg},
          {"flip_prob", augment.flip_prob}}}};
}

void TrainConfig::validate() const {
    if (manifest.empty()) throw ConfigError("config field [data].manifest is required");
    if (resolution < 8 || (resolution & (resolution - 1)) != 0)
        throw ConfigError("config field [data].resolution must be a power of two >= 8");
    if (batch_size < 1) throw ConfigError("config field [train].batch_size must be >= 1");
    if (epochs < 1) throw ConfigError("config field [train].epochs must be >= 1");
    if (max_steps < 0) throw ConfigError("config field [train].max_steps must be >= 0");
    if (buffer_size < 0) throw ConfigError("config field [train].buffer_size must be >= 0");
    if (checkpoint_every < 0)
        throw ConfigError("config field [train].checkpoint_every must be >= 0");
    if (!(optimizer.lr > 0.0)) throw ConfigError("config field [optimizer].lr must be > 0");
    if (optimizer.beta1 < 0.0 || optimizer.beta1 >= 1.0)
        throw ConfigError("config field [optimizer].beta1 must be in [0, 1)");
    if (optimizer.beta2 < 0.0 || optimizer.beta2 >= 1.0)
        throw ConfigError("config field [optimizer].beta2 must be in [0, 1)");
    if (model.gen_base_filters < 1 || model.disc_base_filters < 1)
        throw ConfigError("config field [model].*_base_filters must be >= 1");
    if (model.disc_layers < 1) throw ConfigError("config field [model].disc_layers must be >= 1");
    if (model.dropout_rate < 0.0 || model.dropout_rate >= 1.0)
        throw ConfigError("config field [model].dropout_rate must be in [0, 1)");
    try {
        weights.validate();
        losses::adv_mode_from_string(adv_mode);
        if (augment_enabled) augment.validate(resolution);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::uint64_t TrainConfig::hash() const { return fnv1a64(to_json().dump()); }

ClassifierConfig ClassifierConfig::from_json(const json& j) {
    ClassifierConfig c;
    c.backbone = field<std::string>(j, "classify", "backbone", c.backbone);
    c.head_units1 = field<int>(j, "classify", "head_units1", c.head_units1);
    c.head_units2 = field<int>(j, "classify", "head_units2", c.head_units2);
    c.classes = field<int>(j, "classify", "classes", c.classes);
    c.epochs = field<int>(j, "classify", "epochs", c.epochs);
    c.repeats = field<int>(j, "classify", "repeats", c.repeats);
    c.batch_size = field<int>(j, "classify", "batch_size", c.batch_size);
    c.lr = field<double>(j, "classify", "lr", c.lr);
    c.seed_base = field<std::uint64_t>(j, "classify", "seed_base", c.seed_base);
    c.holdout_fraction = field<double>(j, "classify", "holdout_fraction", c.holdout_fraction);
    return c;
}

ClassifierConfig ClassifierConfig::from_file(const std::filesystem::path& path) {
    ClassifierConfig c = from_json(load_config_file(path));
    c.validate();
    return c;
}

json ClassifierConfig::to_json() const {
    return json{{"classify",
                 {{"backbone", backbone},
                  {"head_units1", head_units1},
                  {"head_units2", head_units2},
                  {"classes", classes},
                  {"epochs", epochs},
                  {"repeats", repeats},
                  {"batch_size", batch_size},
                  {"lr", lr},
                  {"seed_base", seed_base},
                  {"holdout_fraction", holdout_fraction}}}};
}

void ClassifierConfig::validate() const {
    if (backbone != "smallconv")
        throw ConfigError("config field [classify].backbone: only 'smallconv' is bundled "
                          "(pretrained backbones need external weights)");
    if (classes != 0 && classes < 2)
        throw ConfigError("config field [classify].classes must be >= 2 (or 0 = from manifest)");
    if (epochs < 1) throw ConfigError("config field [classify].epochs must be >= 1");
    if (repeats < 1) throw ConfigError("config field [classify].repeats must be >= 1");
    if (batch_size < 1) throw ConfigError("config field [classify].batch_size must be >= 1");
    if (!(lr > 0.0)) throw ConfigError("config field [classify].lr must be > 0");
    if (head_units1 < 1 || head_units2 < 1)
        throw ConfigError("config field [classify].head_units* must be >= 1");
    if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0)
        throw ConfigError("config field [classify].holdout_fraction must be in (0, 1)");
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace tacgap::util
