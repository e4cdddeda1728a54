use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Granularity at which raw attack names are encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TaxonomyLevel {
    #[default]
    Attack34,
    Category10,
    Binary2,
}

impl TaxonomyLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Attack34 => "attack34",
            Self::Category10 => "category10",
            Self::Binary2 => "binary2",
        }
    }
}

impl fmt::Display for TaxonomyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaxonomyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "attack34" => Ok(Self::Attack34),
            "category10" => Ok(Self::Category10),
            "binary2" => Ok(Self::Binary2),
            other => Err(Error::InvalidParameter(format!(
                "unknown taxonomy level `{other}` (expected attack34, category10 or binary2)"
            ))),
        }
    }
}

pub const BENIGN_CATEGORY: &str = "Benign";
const ATTACK_BINARY: &str = "Attack";

/// Column names of the CICIoT2023 CSV release, in file order (label excluded).
pub const CICIOT2023_FEATURES: [&str; 46] = [
    "flow_duration",
    "Header_Length",
    "Protocol Type",
    "Duration",
    "Rate",
    "Srate",
    "Drate",
    "fin_flag_number",
    "syn_flag_number",
    "rst_flag_number",
    "psh_flag_number",
    "ack_flag_number",
    "ece_flag_number",
    "cwr_flag_number",
    "ack_count",
    "syn_count",
    "fin_count",
    "urg_count",
    "rst_count",
    "HTTP",
    "HTTPS",
    "DNS",
    "Telnet",
    "SMTP",
    "SSH",
    "IRC",
    "TCP",
    "UDP",
    "DHCP",
    "ARP",
    "ICMP",
    "IPv",
    "LLC",
    "Tot sum",
    "Min",
    "Max",
    "AVG",
    "Std",
    "Tot size",
    "IAT",
    "Number",
    "Magnitue",
    "Radius",
    "Covariance",
    "Variance",
    "Weight",
];

const CICIOT2023_ATTACKS: [(&str, &str); 34] = [
    ("DDoS-RSTFINFlood", "DDoS"),
    ("DDoS-PSHACK_Flood", "DDoS"),
    ("DDoS-SYN_Flood", "DDoS"),
    ("DDoS-UDP_Flood", "DDoS"),
    ("DDoS-TCP_Flood", "DDoS"),
    ("DDoS-ICMP_Flood", "DDoS"),
    ("DDoS-SynonymousIP_Flood", "DDoS"),
    ("DDoS-ACK_Fragmentation", "DDoS"),
    ("DDoS-UDP_Fragmentation", "DDoS"),
    ("DDoS-ICMP_Fragmentation", "DDoS"),
    ("DDoS-SlowLoris", "DDoS"),
    ("DDoS-HTTP_Flood", "DDoS"),
    ("DoS-UDP_Flood", "DoS"),
    ("DoS-SYN_Flood", "DoS"),
    ("DoS-TCP_Flood", "DoS"),
    ("DoS-HTTP_Flood", "DoS"),
    ("Mirai-greeth_flood", "Mirai"),
    ("Mirai-greip_flood", "Mirai"),
    ("Mirai-udpplain", "Mirai"),
    ("MITM-ArpSpoofing", "MITM"),
    ("DNS_Spoofing", "DNS"),
    ("Recon-PingSweep", "Recon"),
    ("Recon-OSScan", "Recon"),
    ("Recon-PortScan", "Recon"),
    ("Recon-HostDiscovery", "Recon"),
    ("VulnerabilityScan", "VulnerabilityScan"),
    ("DictionaryBruteForce", "BruteForce"),
    ("BenignTraffic", BENIGN_CATEGORY),
    ("SqlInjection", "Other"),
    ("CommandInjection", "Other"),
    ("Backdoor_Malware", "Other"),
    ("Uploading_Attack", "Other"),
    ("XSS", "Other"),
    ("BrowserHijacking", "Other"),
];

/// Attack name → category → {Attack, Benign}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTaxonomy {
    attack_to_category: BTreeMap<String, String>,
    category_to_binary: BTreeMap<String, String>,
    /// Attack names in canonical order.
    attack_order: Vec<String>,
}

impl LabelTaxonomy {
    /// The 34 CICIoT2023 labels grouped into 10 categories.
    pub fn ciciot2023() -> Self {
        Self::from_pairs(CICIOT2023_ATTACKS.iter().copied(), BENIGN_CATEGORY)
            .expect("built-in taxonomy is consistent")
    }

    /// Builds a taxonomy from `(attack, category)` pairs; `benign` names the
    /// single category that collapses to the benign binary class.
    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
        benign: &str,
    ) -> Result<Self> {
        let mut attack_to_category = BTreeMap::new();
        let mut attack_order = Vec::new();
        let mut category_to_binary = BTreeMap::new();
        for (attack, category) in pairs {
            if attack_to_category
                .insert(attack.to_string(), category.to_string())
                .is_some()
            {
                return Err(Error::InvalidParameter(format!(
                    "attack `{attack}` mapped twice"
                )));
            }
            attack_order.push(attack.to_string());
            let binary = if category == benign {
                BENIGN_CATEGORY
            } else {
                ATTACK_BINARY
            };
            category_to_binary.insert(category.to_string(), binary.to_string());
        }
        if !category_to_binary.contains_key(benign) {
            return Err(Error::InvalidParameter(format!(
                "benign category `{benign}` has no attacks"
            )));
        }
        Ok(Self {
            attack_to_category,
            category_to_binary,
            attack_order,
        })
    }

    pub fn attack_names(&self) -> impl Iterator<Item = &str> {
        self.attack_order.iter().map(String::as_str)
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.category_to_binary.keys().map(String::as_str)
    }

    pub fn category_of(&self, attack: &str) -> Option<&str> {
        self.attack_to_category.get(attack).map(String::as_str)
    }

    pub fn binary_of_category(&self, category: &str) -> Option<&str> {
        self.category_to_binary.get(category).map(String::as_str)
    }

    /// Maps a raw attack name to its class name at `level`.
    pub fn map(&self, attack: &str, level: TaxonomyLevel) -> Option<&str> {
        let (name, category) = self.attack_to_category.get_key_value(attack)?;
        match level {
            TaxonomyLevel::Attack34 => Some(name.as_str()),
            TaxonomyLevel::Category10 => Some(category.as_str()),
            TaxonomyLevel::Binary2 => self.binary_of_category(category),
        }
    }
}
