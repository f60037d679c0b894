#include "toscadata/catalog.hpp"

#include <initializer_list>

namespace toscadata {

namespace {

using namespace names;

struct Prop {
  std::string name;
  ValueType type = ValueType::string;
  std::optional<Value> default_value = std::nullopt;
  bool required = true;
  std::optional<std::string> description = std::nullopt;
};

struct Builder {
  TypeDefinition def;

  Builder(std::string name, TypeKind kind, std::optional<std::string> parent) {
    def.name = std::move(name);
    def.kind = kind;
    def.derived_from = std::move(parent);
  }

  Builder& describe(std::string text) {
    def.description = std::move(text);
    return *this;
  }
  Builder& meta(std::string key, std::string value) {
    def.metadata.emplace(std::move(key), std::move(value));
    return *this;
  }
  Builder& props(std::initializer_list<Prop> list) {
    for (const auto& p : list) {
      PropertyDefinition pd;
      pd.name = p.name;
      pd.value_type = p.type;
      pd.default_value = p.default_value;
      pd.required = p.required;
      pd.description = p.description;
      def.properties.emplace(p.name, std::move(pd));
    }
    return *this;
  }
  Builder& unsupported(std::string name) {
    PropertyDefinition pd;
    pd.name = name;
    pd.required = false;
    pd.status = "unsupported";
    def.properties.emplace(std::move(name), std::move(pd));
    return *this;
  }
  Builder& attribute(std::string name) {
    AttributeDefinition ad;
    ad.name = name;
    def.attributes.emplace(std::move(name), std::move(ad));
    return *this;
  }
  Builder& requirement(std::string name, std::string capability,
                       std::string node, std::string relationship,
                       Occurrences occ) {
    def.requirements.push_back(RequirementDefinition{
        std::move(name), std::move(capability), std::move(node),
        std::move(relationship), occ});
    return *this;
  }
  Builder& capability(std::string name, std::string type,
                      std::vector<std::string> sources, Occurrences occ) {
    CapabilityDefinition cd;
    cd.name = name;
    cd.capability_type = std::move(type);
    cd.valid_source_types = std::move(sources);
    cd.occurrences = occ;
    def.capabilities.emplace(std::move(name), std::move(cd));
    return *this;
  }
};

constexpr Occurrences kExactlyOne{1, std::uint32_t{1}};
constexpr Occurrences kAtMostOne{0, std::uint32_t{1}};
constexpr Occurrences kOneOrMore{1, Unbounded{}};

Builder node(std::string name, std::optional<std::string> parent) {
  return Builder(std::move(name), TypeKind::node, std::move(parent));
}

Builder& nifi_hosted(Builder& b) {
  return b.requirement(kHostRequirement, kContainer, kNifi, kHostedOn, kExactlyOne);
}

Builder& pipeline_inputs(Builder& b, std::vector<std::string> local_sources,
                         std::vector<std::string> remote_sources) {
  return b
      .capability("ConnectToPipelineRemote", kConnectToPipeline,
                  std::move(remote_sources), kOneOrMore)
      .capability("ConnectToPipeline", kConnectToPipeline,
                  std::move(local_sources), kOneOrMore);
}

Builder& aws_hosted(Builder& b) {
  return b.requirement(kHostRequirement, kContainer, kAWSPlatform, kHostedOn,
                       kExactlyOne);
}

std::vector<TypeDefinition> build() {
  std::vector<TypeDefinition> out;
  auto add = [&](Builder& b) { out.push_back(b.def); };

  // Normative base types.
  {
    auto b = node(kRootNode, std::nullopt);
    add(b);
  }
  {
    auto b = node(kSoftwareComponent, std::string(kRootNode));
    add(b);
  }
  {
    auto b = node(kCompute, std::string(kRootNode));
    b.requirement(kHostRequirement, kContainer, kRootNode, kHostedOn, kAtMostOne)
        .capability("host", kComputeCapability, {kSoftwareComponent}, kOneOrMore);
    add(b);
  }
  for (const auto& [name, parent] :
       std::initializer_list<std::pair<const char*, const char*>>{
           {kRootCapability, nullptr},
           {kContainer, kRootCapability},
           {kComputeCapability, kContainer},
           {kEndpoint, kRootCapability}}) {
    Builder b(name, TypeKind::capability,
              parent ? std::optional<std::string>(parent) : std::nullopt);
    add(b);
  }
  for (const auto& [name, parent] :
       std::initializer_list<std::pair<const char*, const char*>>{
           {kRootRelationship, nullptr},
           {kHostedOn, kRootRelationship},
           {kConnectsTo, kRootRelationship}}) {
    Builder b(name, TypeKind::relationship,
              parent ? std::optional<std::string>(parent) : std::nullopt);
    add(b);
  }

  // Data pipeline capability and relationship types.
  {
    Builder b(kConnectToPipeline, TypeKind::capability, std::string(kEndpoint));
    b.meta("targetNamespace", "radon.capabilities.datapipeline")
        .meta("abstract", "false")
        .meta("final", "false");
    add(b);
  }
  {
    Builder b(kConnectNifiLocal, TypeKind::relationship, std::string(kConnectsTo));
    add(b);
  }
  {
    Builder b(kConnectNifiRemote, TypeKind::relationship, std::string(kConnectsTo));
    add(b);
  }

  // Hosting platforms.
  {
    auto b = node(kNifi, std::string(kSoftwareComponent));
    b.props({{"port", ValueType::string, Value{std::string("8080")}},
             {"component_version"}})
        .requirement(kHostRequirement, kComputeCapability, kCompute, kHostedOn,
                     kExactlyOne)
        .capability("host", kContainer, {kDataPipeline}, kOneOrMore);
    add(b);
  }
  {
    auto b = node(kAWSPlatform, std::string(kRootNode));
    b.describe("Amazon Web Services account and region hosting VMs and AWS data pipelines.")
        .props({{"region", ValueType::string, std::nullopt, false}})
        .capability("host", kContainer, {kCompute, kStandalone}, kOneOrMore);
    add(b);
  }
  {
    auto b = node(kOpenStackPlatform, std::string(kRootNode));
    b.describe("OpenStack private cloud hosting VMs.")
        .props({{"auth_url", ValueType::string, std::nullopt, false}})
        .capability("host", kContainer, {kCompute}, kOneOrMore);
    add(b);
  }

  // Pipeline hierarchy root.
  {
    auto b = node(kDataPipeline, std::nullopt);
    add(b);
  }
  {
    auto b = node(kPipelineBlock, std::string(kDataPipeline));
    b.attribute("id").props(
        {{kSchedulingStrategy, ValueType::string, Value{std::string(kEventDriven)}},
         {kSchedulingPeriodCron, ValueType::string, Value{std::string("* * * * * ?")}},
         {"name"}});
    add(b);
  }

  // Consumers.
  {
    auto b = node(kSourcePB, std::string(kPipelineBlock));
    b.requirement("connectToPipeline", kConnectToPipeline, kDataPipeline,
                  kConnectNifiLocal, kOneOrMore)
        .requirement("connectToPipelineRemote", kConnectToPipeline, kDataPipeline,
                     kConnectNifiRemote, kOneOrMore);
    nifi_hosted(b);
    add(b);
  }
  {
    auto b = node(kConsumeDataEndPoint, std::string(kSourcePB));
    add(b);
  }
  {
    auto b = node(kConsumeRemote, std::string(kConsumeDataEndPoint));
    add(b);
  }
  {
    auto b = node(kConsumeLocal, std::string(kConsumeDataEndPoint));
    b.props({{"directory"}});
    add(b);
  }
  {
    auto b = node(kConsFTP, std::string(kConsumeRemote));
    b.props({{"hostname"},
             {"port", ValueType::integer, Value{std::int64_t{21}}},
             {"username"},
             {"password", ValueType::string, std::nullopt, false},
             {"remote_path"}});
    add(b);
  }
  {
    auto b = node(kConsSFTP, std::string(kConsumeRemote));
    b.props({{"hostname"},
             {"port", ValueType::integer, Value{std::int64_t{22}}},
             {"username"},
             {"private_key_path", ValueType::string, std::nullopt, false},
             {"remote_path"}});
    add(b);
  }
  {
    auto b = node(kConsGCSBucket, std::string(kConsumeRemote));
    b.props({{"bucket", ValueType::string, std::nullopt, false, "Name of the bucket"},
             {"project_ID", ValueType::string, std::nullopt, true, "ID of the project."},
             {"credential_JSON_file", ValueType::string, std::nullopt, true,
              "Path of the credentials JSON file"}});
    add(b);
  }
  {
    auto b = node(kConsS3Bucket, std::string(kConsumeRemote));
    b.props({{"BucketName"}, {"cred_file_path"}, {"Region"}});
    add(b);
  }
  {
    auto b = node(kConsMinIO, std::string(kConsumeRemote));
    b.props({{"BucketName"}, {"cred_file_path"}, {"MinIO_Endpoint"}});
    add(b);
  }
  {
    auto b = node(kConsMqTT, std::string(kConsumeRemote));
    b.props({{"broker_URI"}, {"topic"}});
    add(b);
  }
  {
    auto b = node(kConsAzureBlob, std::string(kConsumeRemote));
    b.props({{"container_name"}, {"storage_account"}, {"cred_file_path"}});
    add(b);
  }

  // In-flight processors.
  {
    auto b = node(kMidwayPB, std::string(kPipelineBlock));
    b.requirement("ConnectToPipeline", kConnectToPipeline, kPipelineBlock,
                  kConnectNifiLocal, kOneOrMore);
    nifi_hosted(b);
    b.requirement("ConnectToPipelineRemote", kConnectToPipeline, kPipelineBlock,
                  kConnectNifiRemote, kOneOrMore);
    pipeline_inputs(b, {kSourcePB, kMidwayPB}, {kSourcePB, kMidwayPB});
    add(b);
  }
  for (const char* name : {kLocalAction, kRemoteAction}) {
    auto b = node(name, std::string(kMidwayPB));
    add(b);
  }
  {
    auto b = node(kRouteToRemote, std::string(kMidwayPB));
    b.describe("Routes each item to the downstream block named by the first "
               "matching attribute rule.")
        .props({{"route_predicate", ValueType::string, std::nullopt, true,
                 "Rules 'attr=value->target' separated by ';'"}});
    add(b);
  }
  for (const char* name : {kExecuteCommand, kExecutePython, kExecuteRuby}) {
    auto b = node(name, std::string(kLocalAction));
    b.props({{"script_path"}});
    add(b);
  }
  for (const char* name : {kEncrypt, kDecrypt}) {
    auto b = node(name, std::string(kLocalAction));
    b.props({{"passphrase"}});
    add(b);
  }
  {
    auto b = node(kInvokeLambda, std::string(kRemoteAction));
    b.props({{"function_name"}, {"region"}, {"cred_file_path"}});
    add(b);
  }
  {
    auto b = node(kInvokeOpenFaaS, std::string(kRemoteAction));
    b.props({{"function_name"}, {"gateway_URL"}});
    add(b);
  }
  for (const char* name : {kInvokeFaaSFunction, kInvokeImageFaaSFunction}) {
    auto b = node(name, std::string(kRemoteAction));
    b.props({{"function_URL"},
             {"HTTP_method", ValueType::string, Value{std::string("POST")}}});
    add(b);
  }

  // Publishers.
  {
    auto b = node(kDestinationPB, std::string(kPipelineBlock));
    nifi_hosted(b);
    b.capability("ConnectToPipelineRemote", kConnectToPipeline,
                 {kSourcePB, kMidwayPB}, kOneOrMore)
        .capability("ConnectToPipeline", kConnectToPipeline, {kMidwayPB, kSourcePB},
                    kOneOrMore);
    add(b);
  }
  {
    auto b = node(kPublishRemote, std::string(kDestinationPB));
    add(b);
  }
  {
    auto b = node(kPublishLocal, std::string(kDestinationPB));
    b.props({{"directory"}});
    add(b);
  }
  {
    auto b = node(kPubGCS, std::string(kPublishRemote));
    b.props({{"BucketName"}, {"cred_file_path"}, {"ProjectID"}});
    add(b);
  }
  {
    auto b = node(kPubsS3Bucket, std::string(kPublishRemote));
    b.props({{"BucketName"}, {"cred_file_path"}, {"Region"}});
    add(b);
  }
  {
    auto b = node(kPubsAzureBlob, std::string(kPublishRemote));
    b.props({{"container_name"}, {"storage_account"}, {"cred_file_path"}});
    add(b);
  }
  {
    auto b = node(kPubsMinIO, std::string(kPublishRemote));
    b.props({{"BucketName"}, {"cred_file_path"}, {"MinIO_Endpoint"}});
    add(b);
  }
  {
    auto b = node(kPubsMQTT, std::string(kPublishRemote));
    b.props({{"broker_URI"}, {"topic"}});
    add(b);
  }
  {
    auto b = node(kPubsSFTP, std::string(kPublishRemote));
    b.props({{"hostname"},
             {"port", ValueType::integer, Value{std::int64_t{22}}},
             {"username"},
             {"private_key_path", ValueType::string, std::nullopt, false},
             {"remote_path"}});
    add(b);
  }

  // Self-contained AWS data pipeline tasks; CRON scheduling only.
  {
    auto b = node(kStandalone, std::string(kPipelineBlock));
    b.unsupported(kSchedulingStrategy);
    add(b);
  }
  {
    auto b = node(kAWSCopyS3ToS3, std::string(kStandalone));
    b.props({{"source_bucket"},
             {"destination_bucket"},
             {"source_directory", ValueType::string, std::nullopt, false},
             {"destination_directory", ValueType::string, std::nullopt, false},
             {"cred_file_path"},
             {"log_bucket"}});
    aws_hosted(b);
    add(b);
  }
  {
    auto b = node(kAWSCopyDynamodbToS3, std::string(kStandalone));
    b.props({{"table_name"}, {"destination_bucket"}, {"cred_file_path"}, {"log_bucket"}});
    aws_hosted(b);
    add(b);
  }
  {
    auto b = node(kAWSCopyS3ToDynamodb, std::string(kStandalone));
    b.props({{"source_bucket"}, {"table_name"}, {"cred_file_path"}, {"log_bucket"}});
    aws_hosted(b);
    add(b);
  }
  {
    auto b = node(kAWSShellCommand, std::string(kStandalone));
    b.props({{"command"}, {"cred_file_path"}, {"log_bucket"}});
    aws_hosted(b);
    add(b);
  }
  {
    auto b = node(kAWSSqlActivity, std::string(kStandalone));
    b.props({{"sql_query"}, {"database"}, {"cred_file_path"}, {"log_bucket"}});
    aws_hosted(b);
    add(b);
  }
  return out;
}

}  // namespace

TypeCatalog::TypeCatalog(std::vector<TypeDefinition> definitions) {
  for (auto& def : definitions) {
    std::string name = def.name;
    definitions_.insert_or_assign(std::move(name), std::move(def));
  }
}

const TypeDefinition& TypeCatalog::lookup(const std::string& name) const {
  auto it = definitions_.find(name);
  if (it == definitions_.end())
    throw Error(ErrorCode::UnknownType, "unknown type '" + name + "'");
  return it->second;
}

std::vector<TypeDefinition> TypeCatalog::all() const {
  std::vector<TypeDefinition> out;
  out.reserve(definitions_.size());
  for (const auto& [_, def] : definitions_) out.push_back(def);
  return out;
}

const TypeCatalog& builtin_catalog() {
  static const TypeCatalog catalog(build());
  return catalog;
}

std::string short_type_name(const std::string& qualified) {
  auto pos = qualified.rfind('.');
  return pos == std::string::npos ? qualified : qualified.substr(pos + 1);
}

}  // namespace toscadata
