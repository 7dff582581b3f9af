/** Non-blocking notification stack in the page corner. */

export function showToast(message: string, kind: "info" | "error" = "info", ttlMs = 4000): void {
  let host = document.getElementById("toast-host");
  if (!host) {
    host = document.createElement("div");
    host.id = "toast-host";
    host.style.cssText =
      "position:fixed;right:12px;bottom:12px;display:flex;flex-direction:column;gap:6px;z-index:50";
    document.body.appendChild(host);
  }
  const node = document.createElement("div");
  node.textContent = message;
  node.style.cssText =
    "padding:8px 12px;border-radius:6px;color:#fff;font:13px sans-serif;max-width:320px;" +
    (kind === "error" ? "background:#b33" : "background:#346");
  host.appendChild(node);
  setTimeout(() => node.remove(), ttlMs);
}
