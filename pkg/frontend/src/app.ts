// Page bootstrap: a small start form plus the game view.

import { ApiClient, GameService } from "./api.js";
import { GameView } from "./view.js";

const ENGINES = [
    "human",
    "theorem1",
    "prop2-x-draw",
    "prop2-o-draw",
    "maker-breaker",
    "solver-perfect",
    "random(0)",
];

function option(value: string, label?: string): HTMLOptionElement {
    const el = document.createElement("option");
    el.value = value;
    el.textContent = label ?? value;
    return el;
}

export function mount(root: HTMLElement, client: GameService): GameView {
    const form = document.createElement("div");
    form.id = "start-form";

    const sizeSelect = document.createElement("select");
    sizeSelect.id = "size";
    for (let n = 2; n <= 8; n++) {
        sizeSelect.appendChild(option(String(n), `${n} x ${n}`));
    }
    sizeSelect.value = "4";

    const engineSelect = document.createElement("select");
    engineSelect.id = "engine";
    for (const id of ENGINES) {
        engineSelect.appendChild(option(id));
    }
    engineSelect.value = "theorem1";

    const playsSelect = document.createElement("select");
    playsSelect.id = "engine-plays";
    playsSelect.appendChild(option("first", "engine plays first"));
    playsSelect.appendChild(option("second", "engine plays second"));

    const variantSelect = document.createElement("select");
    variantSelect.id = "variant";
    variantSelect.appendChild(option("strong"));
    variantSelect.appendChild(option("maker-breaker"));

    // the pairing engine only exists in the maker-breaker game; keep the
    // selects consistent so the service doesn't reject the combination
    engineSelect.addEventListener("change", () => {
        if (engineSelect.value === "maker-breaker") {
            variantSelect.value = "maker-breaker";
        }
    });

    const startButton = document.createElement("button");
    startButton.id = "start";
    startButton.textContent = "start game";

    form.append(sizeSelect, engineSelect, playsSelect, variantSelect, startButton);
    root.appendChild(form);

    const viewRoot = document.createElement("div");
    viewRoot.id = "game";
    root.appendChild(viewRoot);
    const view = new GameView(viewRoot, client);

    startButton.addEventListener("click", () => {
        void view.startGame(
            Number(sizeSelect.value),
            engineSelect.value,
            playsSelect.value,
            variantSelect.value,
        );
    });

    return view;
}

// browser entry; absent under tests, which mount into their own roots
const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot) {
    mount(appRoot, new ApiClient(""));
}
