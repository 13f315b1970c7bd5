//! Built-in bilingual vocabulary for synthetic documents.

/// `(japanese, english)` nouns.
pub(super) const NOUNS: &[(&str, &str)] = &[
    ("猫", "cat"),
    ("犬", "dog"),
    ("魚", "fish"),
    ("本", "book"),
    ("車", "car"),
    ("家", "house"),
    ("水", "water"),
    ("山", "mountain"),
    ("川", "river"),
    ("空", "sky"),
    ("海", "sea"),
    ("花", "flower"),
    ("木", "tree"),
    ("鳥", "bird"),
    ("雨", "rain"),
    ("雪", "snow"),
    ("月", "moon"),
    ("星", "star"),
    ("町", "town"),
    ("道", "road"),
    ("店", "shop"),
    ("駅", "station"),
    ("学校", "school"),
    ("先生", "teacher"),
    ("友達", "friend"),
    ("母", "mother"),
    ("父", "father"),
    ("子供", "child"),
    ("手紙", "letter"),
    ("電話", "phone"),
    ("時計", "clock"),
    ("部屋", "room"),
    ("窓", "window"),
    ("机", "desk"),
    ("椅子", "chair"),
    ("肉", "meat"),
    ("卵", "egg"),
    ("米", "rice"),
    ("茶", "tea"),
    ("薬", "medicine"),
    ("夢", "dream"),
    ("歌", "song"),
    ("船", "ship"),
    ("島", "island"),
    ("森", "forest"),
    ("火", "fire"),
    ("石", "stone"),
    ("剣", "sword"),
    ("城", "castle"),
    ("王", "king"),
    ("医者", "doctor"),
    ("警察", "police"),
    ("兵士", "soldier"),
    ("馬", "horse"),
    ("庭", "garden"),
    ("橋", "bridge"),
    ("鍵", "key"),
    ("箱", "box"),
    ("帽子", "hat"),
    ("靴", "shoe"),
    ("地図", "map"),
    ("写真", "photo"),
    ("映画", "movie"),
    ("音楽", "music"),
    ("食事", "meal"),
    ("宝", "treasure"),
    ("風", "wind"),
    ("声", "voice"),
    ("顔", "face"),
    ("心", "heart"),
    ("秘密", "secret"),
    ("約束", "promise"),
    ("戦争", "war"),
    ("世界", "world"),
    ("未来", "future"),
    ("歴史", "history"),
    ("魔法", "magic"),
    ("怪物", "monster"),
    ("機械", "machine"),
    ("武器", "weapon"),
    ("仲間", "comrade"),
    ("敵", "enemy"),
    ("村", "village"),
    ("国", "country"),
    ("船長", "captain"),
    ("列車", "train"),
    ("飛行機", "airplane"),
    ("手", "hand"),
    ("目", "eye"),
];

/// `(dictionary form, polite form, english base, english third person)`.
pub(super) const VERBS: &[(&str, &str, &str, &str)] = &[
    ("食べる", "食べます", "eat", "eats"),
    ("飲む", "飲みます", "drink", "drinks"),
    ("見る", "見ます", "see", "sees"),
    ("読む", "読みます", "read", "reads"),
    ("書く", "書きます", "write", "writes"),
    ("買う", "買います", "buy", "buys"),
    ("運ぶ", "運びます", "carry", "carries"),
    ("探す", "探します", "search", "searches"),
    ("守る", "守ります", "protect", "protects"),
    ("壊す", "壊します", "destroy", "destroys"),
    ("作る", "作ります", "build", "builds"),
    ("開ける", "開けます", "open", "opens"),
    ("閉める", "閉めます", "close", "closes"),
    ("洗う", "洗います", "wash", "washes"),
    ("描く", "描きます", "paint", "paints"),
    ("盗む", "盗みます", "steal", "steals"),
    ("売る", "売ります", "sell", "sells"),
    ("届ける", "届けます", "deliver", "delivers"),
    ("隠す", "隠します", "hide", "hides"),
    ("捨てる", "捨てます", "discard", "discards"),
    ("拾う", "拾います", "collect", "collects"),
    ("借りる", "借ります", "borrow", "borrows"),
    ("倒す", "倒します", "defeat", "defeats"),
];

/// `(dictionary form, past form, english)` i-adjectives.
pub(super) const ADJECTIVES: &[(&str, &str, &str)] = &[
    ("大きい", "大きかった", "big"),
    ("小さい", "小さかった", "small"),
    ("新しい", "新しかった", "new"),
    ("古い", "古かった", "old"),
    ("赤い", "赤かった", "red"),
    ("青い", "青かった", "blue"),
    ("白い", "白かった", "white"),
    ("黒い", "黒かった", "black"),
    ("寒い", "寒かった", "cold"),
    ("暑い", "暑かった", "hot"),
    ("美しい", "美しかった", "beautiful"),
    ("強い", "強かった", "strong"),
    ("弱い", "弱かった", "weak"),
    ("速い", "速かった", "fast"),
    ("重い", "重かった", "heavy"),
    ("明るい", "明るかった", "bright"),
    ("暗い", "暗かった", "dark"),
    ("危ない", "危なかった", "dangerous"),
    ("優しい", "優しかった", "gentle"),
    ("怖い", "怖かった", "scary"),
];

/// English function words the templates use.
pub(super) const FUNCTION_WORDS: &[&str] = &["the", "is", "was", "and", "of", "at", "i", "we", "they"];

/// Characters an OCR pass plausibly confuses Japanese text with.
pub(super) const OCR_CONFUSIONS: &[char] = &[
    'ン', 'ソ', 'シ', 'ツ', 'ロ', '口', '力', 'カ', '二', 'ニ', '工', 'エ', '夕', 'タ', 'ト', '卜', 'へ', 'ヘ', 'り', 'リ',
    'ぬ', 'め', 'わ', 'れ', 'ね', '末', '未', '土', '士', '人', '入', '八',
];
