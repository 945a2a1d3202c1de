#pragma once

#include <vector>

// Command pools the planner draws from. Kept as data so the sampled plans
// vary across seeds while staying realistic.
namespace logbed::attack::vocab {

inline const std::vector<const char*>& webshell_commands() {
    static const std::vector<const char*> v = {
        "id",          "whoami",           "uname -a",      "cat /etc/passwd",
        "ps aux",      "netstat -tlpn",    "ls -la /var/www/html",
        "df -h",       "ip a",             "cat /etc/hosts", "w",
        "last -n 20",
    };
    return v;
}

inline const std::vector<const char*>& root_commands() {
    static const std::vector<const char*> v = {
        "/bin/ls -laR /root/",        "/bin/cat /etc/shadow",
        "/usr/bin/find / -name *.key", "/bin/netstat -tulpn",
        "/bin/cat /etc/sudoers",      "/usr/bin/crontab -l",
    };
    return v;
}

inline const std::vector<const char*>& reverse_shell_commands() {
    static const std::vector<const char*> v = {
        "/usr/bin/tail -n 200 /var/log/auth.log",
        "/bin/cat /root/.ssh/id_rsa",
        "/usr/bin/du -sh /var/lib/mysql",
        "/bin/grep -r password /etc/",
        "/usr/bin/mysqldump --all-databases",
        "/bin/tar czf /tmp/www.tgz /var/www",
        "/usr/sbin/useradd -m -s /bin/bash support",
    };
    return v;
}

} // namespace logbed::attack::vocab
