#include "logbed/behavior/topology.hpp"

namespace logbed::behavior {

const std::vector<MachineDef>& machine_defs() {
    // Edges within one source state compete by sampled weight. Actions are
    // what the emitters translate into log lines.
    static const std::vector<MachineDef> defs = {
        {"cloud", "login", "logout",
         {
             {"login", "files", "login_ok", Idle::Small},
             {"login", "login_failed", "login_failed", Idle::Tiny},
             {"login_failed", "files", "login_ok", Idle::Small},
             {"files", "upload", "upload_file", Idle::Medium},
             {"files", "download", "download_file", Idle::Medium},
             {"files", "favorites", "open_favorites", Idle::Small},
             {"files", "folder", "create_folder", Idle::Medium},
             {"files", "share", "share_file", Idle::Medium},
             {"files", "delete", "delete_file", Idle::Medium},
             {"files", "logout", "logout", Idle::Medium},
             {"upload", "files", "", Idle::Small},
             {"download", "files", "", Idle::Small},
             {"favorites", "files", "", Idle::Small},
             {"folder", "files", "", Idle::Small},
             {"share", "files", "", Idle::Small},
             {"delete", "files", "", Idle::Small},
         }},
        {"webmail", "login", "logout",
         {
             {"login", "inbox", "login_ok", Idle::Small},
             {"login", "login_failed", "login_failed", Idle::Tiny},
             {"login_failed", "inbox", "login_ok", Idle::Small},
             {"inbox", "read", "read_mail", Idle::Medium},
             {"inbox", "compose", "open_compose", Idle::Medium},
             {"inbox", "refresh", "refresh_inbox", Idle::Small},
             {"inbox", "logout", "logout", Idle::Medium},
             {"read", "inbox", "", Idle::Medium},
             {"read", "compose", "open_reply", Idle::Medium},
             {"refresh", "inbox", "", Idle::Tiny},
             {"compose", "send", "send_mail", Idle::Large},
             {"send", "inbox", "", Idle::Small},
         }},
        {"wordpress", "login", "logout",
         {
             {"login", "dashboard", "login_ok", Idle::Small},
             {"login", "login_failed", "login_failed", Idle::Tiny},
             {"login_failed", "dashboard", "login_ok", Idle::Small},
             {"dashboard", "posts", "list_posts", Idle::Small},
             {"dashboard", "comments", "review_comments", Idle::Medium},
             {"dashboard", "media", "browse_media", Idle::Medium},
             {"dashboard", "logout", "logout", Idle::Medium},
             {"posts", "edit", "edit_post", Idle::Medium},
             {"posts", "dashboard", "", Idle::Small},
             {"edit", "edit", "save_draft", Idle::Large},
             {"edit", "publish", "publish_post", Idle::Large},
             {"publish", "posts", "", Idle::Small},
             {"comments", "moderate", "moderate_comment", Idle::Medium},
             {"comments", "dashboard", "", Idle::Small},
             {"moderate", "comments", "", Idle::Small},
             {"media", "upload", "upload_media", Idle::Large},
             {"media", "dashboard", "", Idle::Small},
             {"upload", "media", "", Idle::Small},
         }},
        {"browsing", "pick", "done",
         {
             {"pick", "page", "open_site", Idle::Small},
             {"page", "page", "follow_link", Idle::Medium},
             {"page", "pick", "new_site", Idle::Medium},
             {"page", "done", "close_tab", Idle::Medium},
         }},
        {"ssh", "connect", "closed",
         {
             {"connect", "shell", "auth_ok", Idle::Tiny},
             {"connect", "denied", "auth_failed", Idle::Tiny},
             {"denied", "shell", "auth_ok", Idle::Small},
             {"shell", "shell", "run_command", Idle::Medium},
             {"shell", "closed", "disconnect", Idle::Medium},
         }},
        {"fileshare", "mount", "unmount",
         {
             {"mount", "browse", "mount_share", Idle::Small},
             {"browse", "readfile", "read_file", Idle::Medium},
             {"browse", "writefile", "write_file", Idle::Medium},
             {"browse", "unmount", "unmount_share", Idle::Medium},
             {"readfile", "browse", "", Idle::Small},
             {"writefile", "browse", "", Idle::Small},
         }},
    };
    return defs;
}

std::vector<std::string> machine_names() {
    std::vector<std::string> names;
    for (const auto& m : machine_defs()) names.push_back(m.name);
    return names;
}

std::vector<std::string> weight_keys() {
    std::vector<std::string> keys;
    for (const auto& m : machine_defs())
        for (const auto& e : m.edges)
            keys.push_back(std::string(m.name) + "." + e.from + "->" + e.to);
    for (const auto& m : machine_defs()) keys.push_back(std::string("desk->") + m.name);
    return keys;
}

} // namespace logbed::behavior
