#pragma once

#include <map>
#include <string>
#include <vector>

#include "toscadata/model.hpp"

namespace toscadata {

namespace names {
// Normative TOSCA types the data pipeline library builds on.
inline constexpr const char* kRootNode = "tosca.nodes.Root";
inline constexpr const char* kSoftwareComponent = "tosca.nodes.SoftwareComponent";
inline constexpr const char* kCompute = "tosca.nodes.Compute";
inline constexpr const char* kRootCapability = "tosca.capabilities.Root";
inline constexpr const char* kContainer = "tosca.capabilities.Container";
inline constexpr const char* kComputeCapability = "tosca.capabilities.Compute";
inline constexpr const char* kEndpoint = "tosca.capabilities.Endpoint";
inline constexpr const char* kRootRelationship = "tosca.relationships.Root";
inline constexpr const char* kHostedOn = "tosca.relationships.HostedOn";
inline constexpr const char* kConnectsTo = "tosca.relationships.ConnectsTo";

inline constexpr const char* kDataPipeline = "radon.nodes.abstract.DataPipeline";
inline constexpr const char* kPipelineBlock = "radon.nodes.datapipeline.PipelineBlock";
inline constexpr const char* kSourcePB = "radon.nodes.datapipeline.SourcePB";
inline constexpr const char* kMidwayPB = "radon.nodes.datapipeline.MidwayPB";
inline constexpr const char* kDestinationPB = "radon.nodes.datapipeline.DestinationPB";
inline constexpr const char* kStandalone = "radon.nodes.datapipeline.Standalone";

inline constexpr const char* kConsumeDataEndPoint = "radon.nodes.datapipeline.source.ConsumeDataEndPoint";
inline constexpr const char* kConsumeRemote = "radon.nodes.datapipeline.source.ConsumeRemote";
inline constexpr const char* kConsumeLocal = "radon.nodes.datapipeline.source.ConsumeLocal";
inline constexpr const char* kConsFTP = "radon.nodes.datapipeline.source.ConsFTP";
inline constexpr const char* kConsSFTP = "radon.nodes.datapipeline.source.ConsSFTP";
inline constexpr const char* kConsGCSBucket = "radon.nodes.datapipeline.source.ConsGCSBucket";
inline constexpr const char* kConsS3Bucket = "radon.nodes.datapipeline.source.ConsS3Bucket";
inline constexpr const char* kConsMinIO = "radon.nodes.datapipeline.source.ConsMinIO";
inline constexpr const char* kConsMqTT = "radon.nodes.datapipeline.source.ConsMqTT";
inline constexpr const char* kConsAzureBlob = "radon.nodes.datapipeline.source.ConsAzureBlob";

inline constexpr const char* kLocalAction = "radon.nodes.datapipeline.process.LocalAction";
inline constexpr const char* kRemoteAction = "radon.nodes.datapipeline.process.RemoteAction";
inline constexpr const char* kRouteToRemote = "radon.nodes.datapipeline.process.RouteToRemote";
inline constexpr const char* kExecuteCommand = "radon.nodes.datapipeline.process.ExecuteCommand";
inline constexpr const char* kExecutePython = "radon.nodes.datapipeline.process.ExecutePython";
inline constexpr const char* kExecuteRuby = "radon.nodes.datapipeline.process.ExecuteRuby";
inline constexpr const char* kEncrypt = "radon.nodes.datapipeline.process.Encrypt";
inline constexpr const char* kDecrypt = "radon.nodes.datapipeline.process.Decrypt";
inline constexpr const char* kInvokeLambda = "radon.nodes.datapipeline.process.InvokeLambda";
inline constexpr const char* kInvokeOpenFaaS = "radon.nodes.datapipeline.process.InvokeOpenFaaS";
inline constexpr const char* kInvokeFaaSFunction = "radon.nodes.datapipeline.process.InvokeFaaSFunction";
inline constexpr const char* kInvokeImageFaaSFunction = "radon.nodes.datapipeline.process.InvokeImageFaaSFunction";

inline constexpr const char* kPublishRemote = "radon.nodes.datapipeline.destination.PublishRemote";
inline constexpr const char* kPublishLocal = "radon.nodes.datapipeline.destination.PublishLocal";
inline constexpr const char* kPubGCS = "radon.nodes.datapipeline.destination.PubGCS";
inline constexpr const char* kPubsS3Bucket = "radon.nodes.datapipeline.destination.PubsS3Bucket";
inline constexpr const char* kPubsAzureBlob = "radon.nodes.datapipeline.destination.PubsAzureBlob";
inline constexpr const char* kPubsMinIO = "radon.nodes.datapipeline.destination.PubsMinIO";
inline constexpr const char* kPubsMQTT = "radon.nodes.datapipeline.destination.PubsMQTT";
inline constexpr const char* kPubsSFTP = "radon.nodes.datapipeline.destination.PubsSFTP";

inline constexpr const char* kAWSCopyS3ToS3 = "radon.nodes.datapipeline.standalone.AWSCopyS3ToS3";
inline constexpr const char* kAWSCopyDynamodbToS3 = "radon.nodes.datapipeline.standalone.AWSCopyDynamodbToS3";
inline constexpr const char* kAWSCopyS3ToDynamodb = "radon.nodes.datapipeline.standalone.AWSCopyS3ToDynamodb";
inline constexpr const char* kAWSShellCommand = "radon.nodes.datapipeline.standalone.AWSShellCommand";
inline constexpr const char* kAWSSqlActivity = "radon.nodes.datapipeline.standalone.AWSSqlActivity";

inline constexpr const char* kNifi = "radon.nodes.nifi.Nifi";
inline constexpr const char* kAWSPlatform = "radon.nodes.aws.AWSPlatform";
inline constexpr const char* kOpenStackPlatform = "radon.nodes.openstack.OpenStackPlatform";

inline constexpr const char* kConnectToPipeline = "radon.capabilities.datapipeline.ConnectToPipeline";
inline constexpr const char* kConnectNifiLocal = "radon.relationships.datapipeline.ConnectNifiLocal";
inline constexpr const char* kConnectNifiRemote = "radon.relationships.datapipeline.ConnectNifiRemote";

inline constexpr const char* kSchedulingStrategy = "schedulingStrategy";
inline constexpr const char* kSchedulingPeriodCron = "schedulingPeriodCRON";
inline constexpr const char* kEventDriven = "EVENT_DRIVEN";
inline constexpr const char* kCronDriven = "CRON_DRIVEN";
inline constexpr const char* kHostRequirement = "host";
}  // namespace names

/// The built-in TOSCAdata type library. Immutable once built.
class TypeCatalog {
 public:
  explicit TypeCatalog(std::vector<TypeDefinition> definitions);

  const TypeDefinition& lookup(const std::string& name) const;
  bool contains(const std::string& name) const {
    return definitions_.contains(name);
  }
  const std::map<std::string, TypeDefinition>& definitions() const {
    return definitions_;
  }
  std::vector<TypeDefinition> all() const;

 private:
  std::map<std::string, TypeDefinition> definitions_;
};

/// Shared instance; identical on every call.
const TypeCatalog& builtin_catalog();

/// Short display name: the last dotted component.
std::string short_type_name(const std::string& qualified);

}  // namespace toscadata
