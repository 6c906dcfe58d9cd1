// Tiny DOM helpers shared by the views.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

// ApiError surface: code, message, and a retry action.
export function errorBox(code: string, message: string, retry: () => void): HTMLElement {
  const button = el("button", { type: "button" }, ["Retry"]);
  button.addEventListener("click", retry);
  return el("div", { class: "error-box", role: "alert" }, [
    el("strong", {}, [code]),
    el("span", {}, [` ${message} `]),
    button,
  ]);
}

export function badge(text: string, kind: string): HTMLElement {
  return el("span", { class: `badge badge-${kind}` }, [text]);
}
